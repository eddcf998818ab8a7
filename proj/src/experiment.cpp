// Copyright 2026 The qsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsteer/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "qsteer/bases.hpp"
#include "qsteer/formulas.hpp"
#include "qsteer/protocol.hpp"

namespace qsteer {
namespace {

constexpr std::size_t kMaxDim = 4096;
constexpr double kMubTol = 1e-12;

std::string label(const ExperimentConfig& config, ExperimentKind fallback) {
  return config.name.empty() ? to_string(fallback) : config.name;
}

std::size_t checked_power(std::size_t d, std::size_t l, const char* field) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < l; ++k) {
    out *= d;
    if (out > kMaxDim) {
      throw ConfigError(field, "composite dimension exceeds " + std::to_string(kMaxDim));
    }
  }
  return out;
}

OrthonormalBasis intermediate_for(const ExperimentConfig& config, const OrthonormalBasis& target) {
  if (config.basis == BasisChoice::param2d) return basis_2d(config.theta, config.phi, target);
  return fourier_basis(target);
}

DensityMatrix initial_state(const StateSpec& spec, const OrthonormalBasis& frame) {
  const std::size_t d = frame.dim();
  switch (spec.kind) {
    case StateSpec::Kind::maximally_mixed:
      return maximally_mixed(d);
    case StateSpec::Kind::pure: {
      if (spec.index) return DensityMatrix::from_pure(frame.state(*spec.index));
      CVector coords(static_cast<Eigen::Index>(spec.amplitudes.size()));
      for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) {
        coords(static_cast<Eigen::Index>(i)) = spec.amplitudes[i];
      }
      return DensityMatrix::from_pure(PureState::normalized(frame.matrix() * coords));
    }
    case StateSpec::Kind::qubit_like:
      return qubit_like_density(QubitLikeSpec{.p = spec.p,
                                              .gamma = spec.gamma,
                                              .psi = frame.state(spec.psi),
                                              .psi_perp = frame.state(spec.psi_perp)});
    case StateSpec::Kind::matrix: {
      const CMatrix& m = *spec.matrix;
      return DensityMatrix(frame.matrix() * m * frame.matrix().adjoint());
    }
  }
  throw std::logic_error("initial_state: unknown state kind");
}

double target_mass(const DensityMatrix& rho, const Protocol& protocol) {
  double mass = 0.0;
  for (auto t : protocol.targets()) mass += target_overlap(rho, protocol.target_basis().state(t));
  return std::clamp(mass, 0.0, 1.0);
}

// Fills exact, Monte Carlo and (optionally) brute-force verification for
// every round count of the config; closed_form is left to the caller.
std::vector<ResultRow> evaluate_rounds(const ExperimentConfig& config, const DensityMatrix& rho,
                                       const Protocol& protocol, const std::string& name,
                                       std::size_t d_column) {
  const std::vector<double> curve = exact_success_curve(rho, protocol.with_rounds(config.rounds.last));
  const bool monte_carlo = config.trajectories > 0 && !config.exact_only;
  std::vector<ResultRow> rows;
  for (std::size_t n = config.rounds.first; n <= config.rounds.last; ++n) {
    ResultRow row;
    row.experiment = name;
    row.d = d_column;
    row.n = n;
    row.exact = curve[n];
    const Protocol at_n = protocol.with_rounds(n);
    if (config.verify_brute_force) {
      const double oracle = brute_force_success(rho, at_n);
      if (std::abs(oracle - curve[n]) > 1e-12) {
        std::ostringstream os;
        os << "brute-force oracle disagrees with the Markov evaluation at N = " << n << " ("
           << oracle << " vs " << curve[n] << ")";
        throw std::logic_error(os.str());
      }
    }
    if (monte_carlo) {
      const Estimate est = monte_carlo_success(rho, at_n, config.trajectories, config.seed, config.workers);
      row.mc_estimate = est.value;
      row.mc_stderr = est.std_error;
      row.seed = config.seed;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> run_single(const ExperimentConfig& config) {
  const auto target = OrthonormalBasis::computational(config.d);
  const Protocol protocol(target, intermediate_for(config, target), config.targets, config.rounds.last);
  const DensityMatrix rho = initial_state(config.state, target);
  const double mass = target_mass(rho, protocol);
  const std::size_t m = protocol.targets().size();
  const bool param2d = config.basis == BasisChoice::param2d;
  const bool mub = unbiasedness_defect(target, protocol.intermediate_basis()) < kMubTol;

  auto rows = evaluate_rounds(config, rho, protocol, label(config, ExperimentKind::single), config.d);
  for (auto& row : rows) {
    if (param2d) row.theta = config.theta;
    if (param2d && m == 1) {
      row.closed_form = formulas::ps_2d(config.theta, 1.0 - mass, row.n);
    } else if (mub) {
      row.closed_form = formulas::ps_multi_target(config.d, m, mass, row.n);
    }
  }
  return rows;
}

std::vector<ResultRow> run_haar_average(const ExperimentConfig& config) {
  const auto target = OrthonormalBasis::computational(config.d);
  const Protocol protocol(target, intermediate_for(config, target), config.targets, config.rounds.last);
  const std::size_t m = protocol.targets().size();
  const bool mub = unbiasedness_defect(target, protocol.intermediate_basis()) < kMubTol;
  const std::vector<double> mixed = exact_success_curve(maximally_mixed(config.d), protocol);

  const std::size_t points = config.rounds.last + 1;
  std::vector<double> sum(points, 0.0);
  std::vector<double> sum_sq(points, 0.0);
  const std::size_t samples = config.exact_only ? 0 : config.trajectories;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng = substream(config.seed, s);
    const auto psi = haar_random_pure(config.d, rng);
    const auto curve = exact_success_curve(DensityMatrix::from_pure(psi), protocol);
    for (std::size_t n = 0; n < points; ++n) {
      sum[n] += curve[n];
      sum_sq[n] += curve[n] * curve[n];
    }
  }

  std::vector<ResultRow> rows;
  for (std::size_t n = config.rounds.first; n <= config.rounds.last; ++n) {
    ResultRow row;
    row.experiment = label(config, ExperimentKind::haar_average);
    row.d = config.d;
    row.n = n;
    row.exact = mixed[n];
    if (mub) row.closed_form = formulas::avg_ps(config.d, n, m);
    if (samples > 0) {
      const double count = static_cast<double>(samples);
      const double mean = sum[n] / count;
      const double var = samples > 1 ? std::max(0.0, (sum_sq[n] - count * mean * mean) / (count - 1.0)) : 0.0;
      row.mc_estimate = mean;
      row.mc_stderr = std::sqrt(var / count);
      row.seed = config.seed;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> run_bipartite(const ExperimentConfig& config) {
  const std::size_t d = config.d;
  const formulas::BipartiteTargetSpec spec{.alpha = config.alpha,
                                           .beta = config.beta,
                                           .d = d,
                                           .psi = PureState::basis_vector(d, 0),
                                           .psi_perp = PureState::basis_vector(d, 1)};
  const auto target = OrthonormalBasis::completing(formulas::bipartite_target(spec));
  const Protocol protocol(target, fourier_basis(target), {0}, config.rounds.last);
  const DensityMatrix single = qubit_like_density(QubitLikeSpec{.p = config.state.p,
                                                                .gamma = config.state.gamma,
                                                                .psi = spec.psi,
                                                                .psi_perp = spec.psi_perp});
  const DensityMatrix rho = tensor(single, single);

  auto rows = evaluate_rounds(config, rho, protocol, label(config, ExperimentKind::bipartite), d);
  for (auto& row : rows) {
    row.gamma_sq = std::norm(config.state.gamma);
    row.closed_form = formulas::ps_bipartite(spec, config.state.p, config.state.gamma, row.n);
  }
  return rows;
}

std::vector<ResultRow> run_copies(const ExperimentConfig& config) {
  const std::size_t d = config.d;
  const std::size_t l = config.copies;
  const std::size_t composite = checked_power(d, l, "copies.l");
  const auto local = OrthonormalBasis::computational(d);
  const DensityMatrix rho = initial_state(config.state, local);

  // |k>^{(x) l} sits at index k (1 + d + ... + d^{l-1}).
  const std::size_t stride = (composite - 1) / (d - 1);
  std::vector<std::size_t> targets;
  std::vector<double> overlaps;
  for (auto k : config.targets) {
    targets.push_back(k * stride);
    overlaps.push_back(std::clamp(target_overlap(rho, local.state(k)), 0.0, 1.0));
  }
  const auto target = OrthonormalBasis::computational(composite);
  const Protocol protocol(target, fourier_basis(target), targets, config.rounds.last);
  const DensityMatrix rho_l = tensor_power(rho, l);

  auto rows = evaluate_rounds(config, rho_l, protocol, label(config, ExperimentKind::copies), d);
  for (auto& row : rows) {
    row.closed_form = formulas::ps_copies(d, l, overlaps.size(), overlaps, row.n);
  }
  return rows;
}

std::vector<ResultRow> run_figure1a(const ExperimentConfig& config) {
  struct Series {
    const char* tag;
    double overlap;
  };
  const Series series[] = {{"2/3", 2.0 / 3.0}, {"1/3", 1.0 / 3.0}, {"0", 0.0}};
  std::vector<ResultRow> out;
  for (const auto& s : series) {
    ExperimentConfig point = config;
    point.d = 2;
    point.basis = BasisChoice::param2d;
    point.theta = std::numbers::pi / 4.0;
    point.phi = 0.0;
    point.targets = {0};
    point.state = StateSpec{};
    point.state.kind = StateSpec::Kind::qubit_like;
    point.state.p = s.overlap;
    point.name = std::string("figure1a[overlap=") + s.tag + "]";
    for (auto& row : run_single(point)) {
      row.closed_form = formulas::ps_2d_max(1.0 - s.overlap, row.n);
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<ResultRow> run_figure1b(const ExperimentConfig& config) {
  struct Series {
    const char* tag;
    double theta;
  };
  const Series series[] = {{"pi/4", std::numbers::pi / 4.0},
                           {"pi/8", std::numbers::pi / 8.0},
                           {"pi/12", std::numbers::pi / 12.0}};
  std::vector<ResultRow> out;
  for (const auto& s : series) {
    ExperimentConfig point = config;
    point.d = 2;
    point.basis = BasisChoice::param2d;
    point.theta = s.theta;
    point.phi = 0.0;
    point.targets = {0};
    point.state = StateSpec{};
    point.state.kind = StateSpec::Kind::pure;
    point.state.index = 1;
    point.name = std::string("figure1b[theta=") + s.tag + "]";
    auto rows = run_single(point);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

void apply_axis(ExperimentConfig& point, const std::string& axis, double value) {
  const std::string field = "sweep." + axis;
  auto as_count = [&](double v) {
    if (v < 0.0 || v != std::floor(v)) throw ConfigError(field, "expects non-negative integers");
    return static_cast<std::size_t>(v);
  };
  if (axis == "theta") {
    point.theta = value;
  } else if (axis == "n") {
    const auto n = as_count(value);
    point.rounds = {n, n};
  } else if (axis == "d") {
    point.d = as_count(value);
  } else if (axis == "p") {
    point.state.p = value;
  } else if (axis == "gamma_sq") {
    if (value < 0.0 || value > 1.0) throw ConfigError(field, "values must lie in [0, 1]");
    const double phase = std::abs(point.state.gamma) > 0.0 ? std::arg(point.state.gamma) : 0.0;
    point.state.gamma = std::polar(std::sqrt(value), phase);
  } else {
    throw ConfigError(field, "unknown sweep axis");
  }
}

std::vector<ResultRow> dispatch(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::single: return run_single(config);
    case ExperimentKind::haar_average: return run_haar_average(config);
    case ExperimentKind::bipartite: return run_bipartite(config);
    case ExperimentKind::copies: return run_copies(config);
    case ExperimentKind::figure1a: return run_figure1a(config);
    case ExperimentKind::figure1b: return run_figure1b(config);
    case ExperimentKind::sweep: return sweep(config);
  }
  throw std::logic_error("run_experiment: unknown kind");
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::single: return "single";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::haar_average: return "haar_average";
    case ExperimentKind::figure1a: return "figure1a";
    case ExperimentKind::figure1b: return "figure1b";
    case ExperimentKind::bipartite: return "bipartite";
    case ExperimentKind::copies: return "copies";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& text) {
  for (auto k : {ExperimentKind::single, ExperimentKind::sweep, ExperimentKind::haar_average,
                 ExperimentKind::figure1a, ExperimentKind::figure1b, ExperimentKind::bipartite,
                 ExperimentKind::copies}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

void validate(const ExperimentConfig& config) {
  if (config.kind == ExperimentKind::figure1a || config.kind == ExperimentKind::figure1b) {
    if (config.rounds.first > config.rounds.last) throw ConfigError("rounds", "first exceeds last");
    return;
  }
  if (config.kind == ExperimentKind::sweep) {
    if (config.base == ExperimentKind::sweep || config.base == ExperimentKind::figure1a ||
        config.base == ExperimentKind::figure1b) {
      throw ConfigError("sweep.base", std::string("cannot sweep over '") + to_string(config.base) + "'");
    }
    if (config.axes.empty()) throw ConfigError("sweep", "no sweep axes given");
    for (const auto& axis : config.axes) {
      if (axis.values.empty()) throw ConfigError("sweep." + axis.name, "empty axis");
    }
    return;  // points are validated individually after expansion
  }

  const std::size_t d = config.d;
  if (d < 2) throw ConfigError("d", "must be at least 2");
  if (d > kMaxDim) throw ConfigError("d", "exceeds " + std::to_string(kMaxDim));
  if (config.rounds.first > config.rounds.last) throw ConfigError("rounds", "first exceeds last");

  if (config.kind != ExperimentKind::bipartite) {
    if (config.targets.empty()) throw ConfigError("basis.targets", "empty target set");
    for (auto t : config.targets) {
      if (t >= d) throw ConfigError("basis.targets", "index " + std::to_string(t) + " >= d");
    }
  }
  if (config.basis == BasisChoice::param2d) {
    if (d != 2) throw ConfigError("basis.kind", "param2d requires d = 2");
    if (config.kind == ExperimentKind::bipartite || config.kind == ExperimentKind::copies) {
      throw ConfigError("basis.kind", "param2d is only available for single and haar_average");
    }
    if (!std::isfinite(config.theta)) throw ConfigError("basis.theta", "not finite");
  }

  const StateSpec& s = config.state;
  switch (s.kind) {
    case StateSpec::Kind::pure:
      if (s.index) {
        if (*s.index >= d) throw ConfigError("state.index", "index >= d");
      } else if (s.amplitudes.size() != d) {
        throw ConfigError("state.amplitudes", "need exactly d amplitudes");
      } else {
        double norm = 0.0;
        for (auto a : s.amplitudes) norm += std::norm(a);
        if (!(norm > 0.0)) throw ConfigError("state.amplitudes", "zero vector");
      }
      break;
    case StateSpec::Kind::qubit_like:
      if (!(s.p >= 0.0 && s.p <= 1.0)) throw ConfigError("state.p", "must lie in [0, 1]");
      if (std::abs(s.gamma) > 1.0 + 1e-15) throw ConfigError("state.gamma", "|gamma| exceeds 1");
      if (s.psi >= d || s.psi_perp >= d) throw ConfigError("state.psi", "index >= d");
      if (s.psi == s.psi_perp) throw ConfigError("state.psi_perp", "must differ from state.psi");
      break;
    case StateSpec::Kind::matrix:
      if (!s.matrix) throw ConfigError("state.file", "no matrix loaded");
      if (static_cast<std::size_t>(s.matrix->rows()) != d) {
        throw ConfigError("state.file", "matrix dimension differs from d");
      }
      try {
        DensityMatrix check(*s.matrix);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("state.file", e.what());
      }
      break;
    case StateSpec::Kind::maximally_mixed:
      break;
  }

  if (config.kind == ExperimentKind::haar_average && !config.exact_only && config.trajectories < 1) {
    throw ConfigError("trajectories", "haar_average needs at least one sample");
  }
  if (config.kind == ExperimentKind::bipartite) {
    if (s.kind != StateSpec::Kind::qubit_like) {
      throw ConfigError("state.kind", "bipartite requires a qubit_like state");
    }
    if (s.psi != 0 || s.psi_perp != 1) {
      throw ConfigError("state.psi", "bipartite uses psi = 0, psi_perp = 1");
    }
    checked_power(d, 2, "d");
    const double norm = std::norm(config.alpha) + std::norm(config.beta);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw ConfigError("bipartite.alpha", "|alpha|^2 + |beta|^2 must equal 1");
    }
  }
  if (config.kind == ExperimentKind::copies) {
    if (config.copies < 1) throw ConfigError("copies.l", "must be at least 1");
    checked_power(d, config.copies, "copies.l");
  }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  return dispatch(config);
}

std::vector<ResultRow> sweep(const ExperimentConfig& config) {
  if (config.axes.empty()) throw ConfigError("sweep", "no sweep axes given");
  for (const auto& axis : config.axes) {
    if (axis.values.empty()) throw ConfigError("sweep." + axis.name, "empty axis");
  }
  if (config.kind == ExperimentKind::sweep) validate(config);

  // Expand the Cartesian product, first axis slowest.
  std::vector<ExperimentConfig> points;
  std::vector<std::size_t> odometer(config.axes.size(), 0);
  const ExperimentKind base = config.kind == ExperimentKind::sweep ? config.base : config.kind;
  bool done = false;
  while (!done) {
    ExperimentConfig point = config;
    point.kind = base;
    point.axes.clear();
    if (point.name.empty()) point.name = to_string(base);
    for (std::size_t a = 0; a < config.axes.size(); ++a) {
      apply_axis(point, config.axes[a].name, config.axes[a].values[odometer[a]]);
    }
    validate(point);
    points.push_back(std::move(point));

    std::size_t a = config.axes.size();
    while (true) {
      if (a == 0) {
        done = true;
        break;
      }
      --a;
      if (++odometer[a] < config.axes[a].values.size()) break;
      odometer[a] = 0;
    }
  }

  std::vector<std::vector<ResultRow>> results(points.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(points.size())));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < points.size(); i += workers) {
        ExperimentConfig point = points[i];
        point.workers = 1;
        results[i] = dispatch(point);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<ResultRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

ExperimentConfig figure1a_config() {
  ExperimentConfig config;
  config.kind = ExperimentKind::figure1a;
  config.d = 2;
  config.rounds = {0, 12};
  return config;
}

ExperimentConfig figure1b_config() {
  ExperimentConfig config;
  config.kind = ExperimentKind::figure1b;
  config.d = 2;
  config.rounds = {0, 12};
  return config;
}

void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << r.d << ',' << r.n << ',' << opt(r.theta) << ','
        << opt(r.gamma_sq) << ',' << opt(r.exact) << ',' << opt(r.closed_form) << ','
        << opt(r.mc_estimate) << ',' << opt(r.mc_stderr) << ','
        << (r.seed ? std::to_string(*r.seed) : std::string()) << '\n';
  }
}

void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qsteer
