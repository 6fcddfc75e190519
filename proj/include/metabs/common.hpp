#ifndef METABS_COMMON_HPP
#define METABS_COMMON_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace metabs
{

using complex = std::complex<double>;

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double pi = std::numbers::pi;

/// Raised for invalid inputs and degenerate configurations. The message
/// names the offending field where one exists.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what)
{
    if (!condition)
        throw Error(what);
}

inline bool all_finite(const std::vector<double>& v)
{
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

} // namespace metabs

#endif
