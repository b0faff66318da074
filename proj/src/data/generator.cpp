/*
 * Copyright (c) 2026 The viskd Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "data/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "data/encoding.hpp"

namespace viskd::data {
namespace {

// Extra logit for single marital status and Medicaid coverage, in units of
// the latent severity.
constexpr double kSingleEffect = 0.5;
constexpr double kMedicaidEffect = 0.4;

struct AgentProfile {
  double usage_intercept;  // logit of receiving the agent at all
  double usage_slope;      // per unit latent severity
  double typical_dose;
};

// Aligned with kAgentNames.
constexpr std::array<AgentProfile, kAgents> kProfiles{{
    {-2.0, 0.6, 5.0},     // dopamine, ug/kg/min
    {-2.2, 0.5, 5.0},     // dobutamine, ug/kg/min
    {-1.6, 0.9, 0.05},    // epinephrine, ug/kg/min
    {-3.0, 0.4, 0.375},   // milrinone, ug/kg/min
    {-1.0, 1.0, 0.03},    // vasopressin, units/min
    {1.8, 1.2, 0.1},      // norepinephrine, ug/kg/min
}};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// E[sigmoid(b + s * z)] for z ~ N(0, 1), by the trapezoid rule on [-8, 8].
double expected_rate(double b, double s) {
  constexpr int kSteps = 1600;
  constexpr double kLo = -8.0, kHi = 8.0;
  const double h = (kHi - kLo) / kSteps;
  double acc = 0.0;
  for (int i = 0; i <= kSteps; ++i) {
    const double z = kLo + h * i;
    const double w = (i == 0 || i == kSteps) ? 0.5 : 1.0;
    acc += w * sigmoid(b + s * z) * std::exp(-0.5 * z * z);
  }
  return acc * h / std::sqrt(2.0 * M_PI);
}

constexpr std::array<double, 4> kMaritalWeights{0.42, 0.28, 0.09, 0.14};
constexpr std::array<double, 4> kInsuranceWeights{0.50, 0.12, 0.25, 0.13};

// Marginal positive rate averaged over the SINGLE and Medicaid shifts.
double marginal_rate(double b, double s) {
  double total = 0.0;
  for (double w : kMaritalWeights) total += w;
  const double p_single = kMaritalWeights[1] / total;
  const double p_medicaid = kInsuranceWeights[1];
  double acc = 0.0;
  for (int single = 0; single < 2; ++single) {
    for (int medicaid = 0; medicaid < 2; ++medicaid) {
      const double w = (single ? p_single : 1.0 - p_single) * (medicaid ? p_medicaid : 1.0 - p_medicaid);
      const double shift = kSingleEffect * single + kMedicaidEffect * medicaid;
      acc += w * expected_rate(b + s * shift, s);
    }
  }
  return acc;
}

// Intercept that hits the target positive rate.
double calibrate_intercept(double rate, double s) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (marginal_rate(mid, s) < rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

template <std::size_t N>
std::size_t draw_index(Rng& rng, const std::array<double, N>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < N; ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return N - 1;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

void GeneratorOptions::validate() const {
  if (n_patients < 20) throw_config("generator: n_patients must be >= 20");
  if (!(signal_strength >= 0.0) || !std::isfinite(signal_strength)) {
    throw_config("generator: signal_strength must be finite and >= 0");
  }
  if (!(missingness_rate >= 0.0 && missingness_rate <= 1.0)) {
    throw_config("generator: missingness_rate must lie in [0, 1]");
  }
  if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
    throw_config("generator: positive_rate must lie in (0, 1)");
  }
}

std::vector<PatientRecord> generate_synthetic_cohort(const GeneratorOptions& options) {
  options.validate();
  Rng rng = make_rng(options.seed, "data");
  std::normal_distribution<double> normal(0.0, 1.0);
  const EncodingManifest manifest = EncodingManifest::standard();
  const auto& races = manifest.field("race").categories;
  const double intercept = calibrate_intercept(options.positive_rate, options.signal_strength);
  const double miss = options.missingness_rate;
  auto keep = [&](auto value) -> std::optional<decltype(value)> {
    if (uniform01(rng) < miss) return std::nullopt;
    return value;
  };

  std::vector<PatientRecord> cohort;
  cohort.reserve(options.n_patients);
  for (std::size_t i = 0; i < options.n_patients; ++i) {
    PatientRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "P%06zu", i + 1);
    r.patient_id = id;
    const double z = normal(rng);

    const bool female = uniform01(rng) < 0.43;
    const std::size_t marital =
        draw_index(rng, kMaritalWeights);
    const std::size_t insurance =
        draw_index(rng, kInsuranceWeights);
    std::size_t race = 29;  // WHITE
    const double ru = uniform01(rng);
    if (ru < 0.11) {
      race = 8;  // BLACK/AFRICAN AMERICAN
    } else if (ru < 0.38) {
      race = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(races.size()));
    }
    const double age = std::clamp(66.0 + 4.0 * z + 14.0 * normal(rng), 18.0, 100.0);

    static const char* kMarital[] = {"MARRIED", "SINGLE", "DIVORCED", "WIDOWED"};
    static const char* kInsurance[] = {"Medicare", "Medicaid", "Private", "Other"};
    r.gender = keep(std::string(female ? "F" : "M"));
    r.admission_age = keep(round_to(age, 0.1));
    r.marital_status = keep(std::string(kMarital[marital]));
    r.insurance = keep(std::string(kInsurance[insurance]));
    r.race = keep(races[race]);

    const std::array<double, kScores> centre{7.0, 42.0, 6.0, 36.0};
    const std::array<double, kScores> slope{3.0, 13.0, 2.8, 8.0};
    const std::array<double, kScores> noise{1.2, 6.0, 1.4, 5.0};
    for (std::size_t s = 0; s < kScores; ++s) {
      const double v = std::max(0.0, std::round(centre[s] + slope[s] * z + noise[s] * normal(rng)));
      r.scores[s] = keep(v);
    }

    for (std::size_t a = 0; a < kAgents; ++a) {
      const AgentProfile& p = kProfiles[a];
      const bool used = uniform01(rng) < sigmoid(p.usage_intercept + p.usage_slope * z);
      // Draws happen whether or not the agent is used so one patient's
      // stream does not depend on earlier branches.
      const double start = std::floor(uniform01(rng) * 12.0);
      const double duration = 12.0 + std::floor(uniform01(rng) * 36.0);
      const double level = p.typical_dose * std::exp(0.7 * z + 0.3 * normal(rng));
      const double trend = 1.2 * z - 0.3;
      for (std::size_t h = 0; h < kHours; ++h) {
        double dose = 0.0;
        const double t = static_cast<double>(h);
        const double jitter = normal(rng);
        if (used && t >= start && t < start + duration) {
          dose = level * std::exp(trend * (t - start) / 48.0 + 0.15 * jitter);
        }
        r.doses[h][a] = keep(round_to(dose, 1e-6));
      }
    }
    r.total_vis = hourly_total_vis(r);

    const double latent = z + kSingleEffect * (marital == 1 ? 1.0 : 0.0) +
                          kMedicaidEffect * (insurance == 1 ? 1.0 : 0.0);
    const double p_death = sigmoid(intercept + options.signal_strength * latent);
    r.mortality = uniform01(rng) < p_death ? 1 : 0;
    cohort.push_back(std::move(r));
  }
  return cohort;
}

}  // namespace viskd::data
