#include "expsum/pair_function.hpp"

#include <cmath>
#include <string>

namespace expsum {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw domain_error(std::string("pair function: ") + field +
                       " must be positive and finite");
  }
}

void require_unit_interval(double value, const char* field) {
  if (!(value > 0.0) || !(value < 1.0)) {
    throw domain_error(std::string("pair function: ") + field +
                       " must lie strictly inside (0, 1)");
  }
}

}  // namespace

PairFunction::PairFunction(double pi_coefficient, double pi_base,
                           double mi_coefficient, double mi_base)
    : c_p_(pi_coefficient),
      t_p_(pi_base),
      c_m_(mi_coefficient),
      t_m_(mi_base),
      kind_(pi_base > mi_base ? PairKind::high : PairKind::low) {
  require_positive(c_p_, "pi_coefficient");
  require_positive(c_m_, "mi_coefficient");
  require_unit_interval(t_p_, "pi_base");
  require_unit_interval(t_m_, "mi_base");
  if (std::fabs(std::log(t_p_ / t_m_)) < 1e-12) {
    throw domain_error(
        "pair function: pi_base and mi_base are too close; the "
        "characteristic points degenerate");
  }
}

ExpSum PairFunction::as_expsum() const {
  return ExpSum{{c_p_, t_p_}, {-c_m_, t_m_}};
}

double characteristic_point(const PairFunction& pf,
                            unsigned derivative_order) {
  if (derivative_order > 64) {
    throw domain_error(
        "characteristic_point: derivative order above 64 is not supported");
  }
  const double log_ratio = std::log(pf.pi_base() / pf.mi_base());
  const double numerator =
      std::log(pf.mi_coefficient() / pf.pi_coefficient()) +
      derivative_order *
          std::log(std::log(pf.mi_base()) / std::log(pf.pi_base()));
  return numerator / log_ratio;
}

double zero_point(const PairFunction& pf) {
  return std::log(pf.mi_coefficient() / pf.pi_coefficient()) /
         std::log(pf.pi_base() / pf.mi_base());
}

double extremum_point(const PairFunction& pf) {
  return std::log((pf.mi_coefficient() * std::log(pf.mi_base())) /
                  (pf.pi_coefficient() * std::log(pf.pi_base()))) /
         std::log(pf.pi_base() / pf.mi_base());
}

double inflection_point(const PairFunction& pf) {
  return std::log((pf.mi_coefficient() * ln_power(pf.mi_base(), 2)) /
                  (pf.pi_coefficient() * ln_power(pf.pi_base(), 2))) /
         std::log(pf.pi_base() / pf.mi_base());
}

CharacteristicPoints characteristic_points(const PairFunction& pf) {
  return {zero_point(pf), extremum_point(pf), inflection_point(pf)};
}

PairFunction derivative_pair(const PairFunction& pf) {
  // d/dk [c_p t_p^k - c_m t_m^k] = -|c_p ln t_p| t_p^k + |c_m ln t_m| t_m^k
  // for bases below one, so the mi term supplies the new pi side.
  return PairFunction(pf.mi_coefficient() * -std::log(pf.mi_base()),
                      pf.mi_base(),
                      pf.pi_coefficient() * -std::log(pf.pi_base()),
                      pf.pi_base());
}

}  // namespace expsum
