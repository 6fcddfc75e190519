#ifndef METABS_METABS_HPP
#define METABS_METABS_HPP

#include "common.hpp"
#include "sensor_model.hpp"
#include "channel_model.hpp"
#include "scenario.hpp"
#include "waveform_opt.hpp"
#include "ofdm_link.hpp"
#include "structure_opt.hpp"
#include "config.hpp"
#include "experiments.hpp"

#endif
