#include "bsl/random.hpp"

#include <cmath>
#include <numbers>

namespace bsl {

double RandomStream::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bsl
