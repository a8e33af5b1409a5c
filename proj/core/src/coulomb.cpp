#include "vareff/coulomb.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vareff/error.hpp"

namespace vareff {

namespace {

void check_range(const std::pair<double, double>& range, const char* name, double min_lo) {
  if (!std::isfinite(range.first) || !std::isfinite(range.second))
    fail(errc::invalid_range, std::string(name) + " range must be finite");
  if (!(range.first < range.second))
    fail(errc::invalid_range, std::string(name) + " range must have lower < upper");
  if (range.first < min_lo)
    fail(errc::invalid_range, std::string(name) + " lower bound too small");
}

}  // namespace

DataTable generate_coulomb(const CoulombConfig& config) {
  if (config.n_tuples == 0) fail(errc::invalid_range, "n_tuples must be >= 1");
  check_range(config.q_range, "q", 0.0);
  check_range(config.eps_range, "eps", 0.0);
  check_range(config.r_range, "r", 0.0);
  if (config.r_range.first <= 0.0)
    fail(errc::invalid_range, "r lower bound must be strictly positive");

  const std::size_t n = config.n_tuples;
  std::vector<double> q1(n), q2(n), r(n), eps(n), force(n);
  Rng rng(config.seed);
  for (std::size_t i = 0; i < n; ++i) {
    q1[i] = rng.uniform(config.q_range.first, config.q_range.second);
    q2[i] = rng.uniform(config.q_range.first, config.q_range.second);
    r[i] = rng.uniform(config.r_range.first, config.r_range.second);
    eps[i] = rng.uniform(config.eps_range.first, config.eps_range.second);
    force[i] = q1[i] * q2[i] /
               (4.0 * std::numbers::pi * eps[i] * kVacuumPermittivity * r[i] * r[i]);
  }

  DataTable table({"q1", "q2", "r", "eps", "F"},
                  {std::move(q1), std::move(q2), std::move(r), std::move(eps), std::move(force)},
                  "F");
  std::ostringstream note;
  note << "r sampled uniformly in [" << config.r_range.first << ", " << config.r_range.second
       << "]; lower bound kept away from 0 so the force stays bounded";
  table.notes_.push_back(note.str());
  return table;
}

}  // namespace vareff
