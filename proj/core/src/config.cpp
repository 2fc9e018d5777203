#include "xwigner/config.hpp"

#include <cmath>
#include <string>

#include "xwigner/errors.hpp"

namespace xwigner {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw config_error(std::string("invalid config: ") + field + " " + what);
}

} // namespace

void PhysicalConfig::validate() const {
    require(std::isfinite(mass) && mass > 0.0, "mass", "must be > 0");
    require(std::isfinite(hbar) && hbar > 0.0, "hbar", "must be > 0");
    require(std::isfinite(sigma0) && sigma0 > 0.0, "sigma0", "must be > 0");
    require(std::isfinite(gamma), "gamma", "must be finite");
    require(std::isfinite(beta) && beta > 0.0, "beta", "must be > 0");
    require(std::isfinite(d) && d >= 0.0, "d", "must be >= 0");
    require(std::isfinite(t) && t >= 0.0, "t", "must be >= 0");
    require(std::isfinite(tau) && tau >= 0.0, "tau", "must be >= 0");
}

PhysicalConfig neutron_reference_config() {
    PhysicalConfig cfg;
    cfg.mass = 1.67e-27;
    cfg.hbar = kHbarSI;
    cfg.sigma0 = 7.8e-6;
    cfg.gamma = 0.0;
    cfg.beta = 7.8e-6;
    cfg.d = 100e-6;
    cfg.t = 50e-3;
    cfg.tau = 50e-3;
    return cfg;
}

} // namespace xwigner
