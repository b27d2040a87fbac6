#include "h2net/settings.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "h2net/errors.hpp"

namespace h2net {

namespace {

NumericSettings make_global() {
    NumericSettings ns;
    if (const char* env = std::getenv("H2NET_NUM_TOL")) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(env, &pos);
        } catch (const std::exception&) {
            throw InvalidInput("H2NET_NUM_TOL is not a number: " + std::string(env));
        }
        if (pos != std::string(env).size() || !std::isfinite(v) || v <= 0.0) {
            throw InvalidInput("H2NET_NUM_TOL must be a finite positive number");
        }
        ns.tol_scale = v;
    }
    return ns;
}

} // namespace

const NumericSettings& NumericSettings::global() {
    static const NumericSettings ns = make_global();
    return ns;
}

} // namespace h2net
