#pragma once

// JSON and CSV serialization of reports, solutions and branches.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mems/asymptotics.hpp"
#include "mems/bounds.hpp"
#include "mems/radial.hpp"
#include "mems/shooting.hpp"

namespace mems {

/// %.17g, enough to round-trip a double.
inline std::string format_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {
inline nlohmann::json nullable(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }
}  // namespace detail

inline nlohmann::json to_json(const BoundsReport& r) {
  return {{"lower_ball", r.lower_ball},
          {"lower_nu", r.lower_nu},
          {"lower_powerlaw", detail::nullable(r.lower_powerlaw)},
          {"lower_best", r.lower_best},
          {"upper_1", detail::nullable(r.upper_1)},
          {"upper_2", r.upper_2},
          {"upper_3", detail::nullable(r.upper_3)},
          {"upper_best", r.upper_best},
          {"upper_3_from_slab", r.upper_3_from_slab}};
}

inline nlohmann::json to_json(const RegimeReport& r) {
  nlohmann::json sigma;
  if (r.sigma.is_real) {
    sigma = {{"real", true}, {"plus", r.sigma.plus.real()}, {"minus", r.sigma.minus.real()}};
  } else {
    sigma = {{"real", false}, {"real_part", r.sigma.plus.real()}, {"imag_part", r.sigma.plus.imag()}};
  }
  nlohmann::json out = {{"N", r.n},
                        {"alpha", r.alpha},
                        {"discriminant", r.discriminant},
                        {"sigma", sigma},
                        {"V_e", detail::nullable(r.v_e)},
                        {"alpha_star", r.alpha_star},
                        {"alpha_double_star", detail::nullable(r.alpha_double_star)},
                        {"lambda_asymptote", detail::nullable(r.lambda_asymptote.value)},
                        {"regime", r.regime},
                        {"description", r.description},
                        {"ambiguous", r.ambiguous}};
  if (!r.v_e) out["V_e_reason"] = r.lambda_asymptote.reason;
  if (!r.alpha_double_star) out["alpha_double_star_reason"] = "defined for N >= 8 only";
  if (!r.lambda_asymptote.value) out["lambda_asymptote_reason"] = r.lambda_asymptote.reason;
  return out;
}

inline std::string to_csv(const RadialSolution& s, const std::string& profile) {
  std::ostringstream out;
  out << "# lambda=" << format_exact(s.lambda) << " N=" << s.grid.domain().dimension()
      << " domain=" << s.grid.domain().describe() << " profile=" << profile
      << " residual_norm=" << format_exact(s.residual_norm) << "\n";
  out << "r,u\n";
  for (std::size_t i = 0; i < s.u.size(); ++i) out << format_exact(s.grid.node(i)) << ',' << format_exact(s.u[i]) << '\n';
  return out.str();
}

inline std::string to_csv(const BifurcationBranch& b, int n, const std::string& profile) {
  std::ostringstream out;
  out << "# N=" << n << " profile=" << profile << " lambda_star=" << format_exact(b.lambda_star)
      << " lambda_asymptote=" << (b.lambda_asymptote ? format_exact(*b.lambda_asymptote) : "none")
      << " folds=" << b.folds.size() << (b.partial ? " partial=1" : "") << "\n";
  out << "gamma,lambda,u0,is_fold\n";
  std::size_t next_fold = 0;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& p = b.points[i];
    const bool fold = next_fold < b.folds.size() && b.folds[next_fold] == i;
    if (fold) ++next_fold;
    out << (std::isnan(p.gamma) ? "" : format_exact(p.gamma)) << ',' << format_exact(p.lambda) << ','
        << format_exact(p.u0) << ',' << (fold ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace mems
