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

// INI-style experiment configuration, read through Boost.PropertyTree.
//
//   kind = single          ; single | sweep | haar_average | figure1a | figure1b
//                          ; | bipartite | copies
//   d = 2
//   seed = 7
//   trajectories = 100000
//
//   [rounds]
//   n = 4                  ; or first = 0 / last = 12
//
//   [basis]
//   kind = param2d         ; fourier | param2d
//   theta = pi/4
//   targets = 0
//
//   [state]
//   kind = pure            ; pure | maximally_mixed | qubit_like | matrix
//   index = 1
//
//   [sweep]
//   base = single
//   theta = linspace(0, pi/2, 181)
//   n = 1:10

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qsteer/experiment.hpp"

namespace qsteer {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_factor(const std::string& text, const std::string& field) {
  if (text == "pi") return std::numbers::pi;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field, "cannot parse number '" + text + "'");
  }
  return value;
}

// Accepts plain reals and products/quotients such as "pi/8", "3*pi/4", "-1/3".
double parse_real(const std::string& raw, const std::string& field) {
  std::string text = trim(raw);
  double sign = 1.0;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    if (text.front() == '-') sign = -1.0;
    text = trim(std::string_view(text).substr(1));
  }
  const auto parts = split(text, '/');
  if (parts.empty() || parts.size() > 2) throw ConfigError(field, "cannot parse '" + raw + "'");
  double value = 1.0;
  for (const auto& f : split(parts[0], '*')) value *= parse_factor(f, field);
  if (parts.size() == 2) {
    const double den = parse_factor(parts[1], field);
    if (den == 0.0) throw ConfigError(field, "division by zero");
    value /= den;
  }
  if (!std::isfinite(value)) throw ConfigError(field, "not finite");
  return sign * value;
}

std::size_t parse_count(const std::string& raw, const std::string& field) {
  const std::string text = trim(raw);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + raw + "'");
  }
  return value;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& field) {
  const std::string text = trim(raw);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(field, "expected an unsigned 64-bit integer, got '" + raw + "'");
  }
  return value;
}

bool parse_bool(const std::string& raw, const std::string& field) {
  std::string text = trim(raw);
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(field, "expected a boolean, got '" + raw + "'");
}

std::vector<double> parse_axis(const std::string& raw, const std::string& field) {
  const std::string text = trim(raw);
  if (text.rfind("linspace(", 0) == 0) {
    if (text.back() != ')') throw ConfigError(field, "unterminated linspace(");
    const auto args = split(text.substr(9, text.size() - 10), ',');
    if (args.size() != 3) throw ConfigError(field, "linspace takes (start, stop, count)");
    const double lo = parse_real(args[0], field);
    const double hi = parse_real(args[1], field);
    const std::size_t count = parse_count(args[2], field);
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = hi;
    return out;
  }
  if (text.find(':') != std::string::npos) {
    const auto ends = split(text, ':');
    if (ends.size() != 2) throw ConfigError(field, "range must be 'first:last'");
    const std::size_t lo = parse_count(ends[0], field);
    const std::size_t hi = parse_count(ends[1], field);
    if (lo > hi) return {};
    std::vector<double> out;
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
    return out;
  }
  std::vector<double> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item, field));
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& raw, const std::string& field) {
  std::vector<std::size_t> out;
  for (const auto& item : split(trim(raw), ',')) out.push_back(parse_count(item, field));
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& raw, const std::string& field) {
  std::vector<double> out;
  for (const auto& item : split(trim(raw), ',')) out.push_back(parse_real(item, field));
  return out;
}

void reject_unknown(const pt::ptree& section, const std::string& prefix,
                    const std::set<std::string>& known) {
  for (const auto& [key, child] : section) {
    if (!child.empty()) continue;  // sections are checked separately
    if (!known.contains(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

// Reads key from `section` if present.
std::optional<std::string> get(const pt::ptree& section, const std::string& key) {
  if (auto v = section.get_optional<std::string>(key)) return trim(*v);
  return std::nullopt;
}

Complex parse_complex(const pt::ptree& section, const std::string& prefix, const std::string& key,
                      Complex fallback) {
  const auto re = get(section, key);
  const auto im = get(section, key + "_im");
  if (!re && !im) return fallback;
  return {re ? parse_real(*re, prefix + key) : 0.0, im ? parse_real(*im, prefix + key + "_im") : 0.0};
}

}  // namespace

CMatrix load_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::istringstream is(line);
    std::vector<Complex> row;
    std::string re;
    std::string im;
    while (is >> re) {
      if (!(is >> im)) throw ConfigError("state.file", "odd number of reals on a row of '" + path.string() + "'");
      row.emplace_back(parse_real(re, "state.file"), parse_real(im, "state.file"));
    }
    rows.push_back(std::move(row));
  }
  const auto d = static_cast<Eigen::Index>(rows.size());
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != d) {
      throw ConfigError("state.file", "matrix in '" + path.string() + "' is not square");
    }
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  // Strip '#' and ';' comments (boost's INI reader only knows full-line ';').
  std::ostringstream cleaned;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    cleaned << line << '\n';
  }
  pt::ptree tree;
  try {
    std::istringstream is(cleaned.str());
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("<config>", e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  static const std::set<std::string> kSections{"rounds", "basis", "state", "bipartite", "copies", "sweep"};
  for (const auto& [key, child] : tree) {
    if (!child.empty() && !kSections.contains(key)) throw ConfigError(key, "unknown section");
  }
  reject_unknown(tree, "", {"kind", "name", "d", "seed", "trajectories", "exact_only", "verify", "workers",
                           "rounds", "basis", "state", "bipartite", "copies", "sweep"});

  ExperimentConfig config;
  if (auto v = get(tree, "kind")) {
    auto kind = parse_kind(*v);
    if (!kind) throw ConfigError("kind", "unknown experiment kind '" + *v + "'");
    config.kind = *kind;
  }
  if (config.kind == ExperimentKind::figure1a || config.kind == ExperimentKind::figure1b) {
    config.rounds = {0, 12};
  }
  if (auto v = get(tree, "name")) config.name = *v;
  if (auto v = get(tree, "d")) config.d = parse_count(*v, "d");
  if (auto v = get(tree, "seed")) {
    config.seed = parse_u64(*v, "seed");
    config.seed_given = true;
  }
  if (auto v = get(tree, "trajectories")) config.trajectories = parse_count(*v, "trajectories");
  if (auto v = get(tree, "exact_only")) config.exact_only = parse_bool(*v, "exact_only");
  if (auto v = get(tree, "workers")) {
    config.workers = static_cast<unsigned>(std::max<std::size_t>(1, parse_count(*v, "workers")));
  }
  if (auto v = get(tree, "verify")) {
    if (*v == "brute_force") {
      config.verify_brute_force = true;
    } else if (*v != "none") {
      throw ConfigError("verify", "expected 'brute_force' or 'none'");
    }
  }

  if (auto sec = tree.get_child_optional("rounds")) {
    reject_unknown(*sec, "rounds.", {"n", "first", "last"});
    if (auto v = get(*sec, "n")) {
      const auto n = parse_count(*v, "rounds.n");
      config.rounds = {n, n};
    }
    if (auto v = get(*sec, "first")) config.rounds.first = parse_count(*v, "rounds.first");
    if (auto v = get(*sec, "last")) config.rounds.last = parse_count(*v, "rounds.last");
    if (config.rounds.first > config.rounds.last) {
      throw ConfigError("rounds", "empty round range (first > last)");
    }
  }

  if (auto sec = tree.get_child_optional("basis")) {
    reject_unknown(*sec, "basis.", {"kind", "theta", "phi", "targets"});
    if (auto v = get(*sec, "kind")) {
      if (*v == "fourier") {
        config.basis = BasisChoice::fourier;
      } else if (*v == "param2d") {
        config.basis = BasisChoice::param2d;
      } else {
        throw ConfigError("basis.kind", "expected 'fourier' or 'param2d'");
      }
    }
    if (auto v = get(*sec, "theta")) config.theta = parse_real(*v, "basis.theta");
    if (auto v = get(*sec, "phi")) config.phi = parse_real(*v, "basis.phi");
    if (auto v = get(*sec, "targets")) config.targets = parse_index_list(*v, "basis.targets");
  }

  if (auto sec = tree.get_child_optional("state")) {
    reject_unknown(*sec, "state.", {"kind", "index", "amplitudes", "amplitudes_im", "p", "gamma",
                                    "gamma_im", "psi", "psi_perp", "file"});
    StateSpec& s = config.state;
    if (auto v = get(*sec, "kind")) {
      if (*v == "pure") {
        s.kind = StateSpec::Kind::pure;
      } else if (*v == "maximally_mixed") {
        s.kind = StateSpec::Kind::maximally_mixed;
      } else if (*v == "qubit_like") {
        s.kind = StateSpec::Kind::qubit_like;
      } else if (*v == "matrix") {
        s.kind = StateSpec::Kind::matrix;
      } else {
        throw ConfigError("state.kind", "unknown state kind '" + *v + "'");
      }
    }
    if (auto v = get(*sec, "index")) s.index = parse_count(*v, "state.index");
    if (auto v = get(*sec, "amplitudes")) {
      const auto re = parse_real_list(*v, "state.amplitudes");
      std::vector<double> im(re.size(), 0.0);
      if (auto w = get(*sec, "amplitudes_im")) {
        im = parse_real_list(*w, "state.amplitudes_im");
        if (im.size() != re.size()) throw ConfigError("state.amplitudes_im", "length differs from amplitudes");
      }
      s.amplitudes.clear();
      for (std::size_t i = 0; i < re.size(); ++i) s.amplitudes.emplace_back(re[i], im[i]);
    }
    if (s.kind == StateSpec::Kind::pure && !s.index && s.amplitudes.empty()) {
      throw ConfigError("state.index", "pure state needs 'index' or 'amplitudes'");
    }
    if (auto v = get(*sec, "p")) s.p = parse_real(*v, "state.p");
    s.gamma = parse_complex(*sec, "state.", "gamma", s.gamma);
    if (auto v = get(*sec, "psi")) s.psi = parse_count(*v, "state.psi");
    if (auto v = get(*sec, "psi_perp")) s.psi_perp = parse_count(*v, "state.psi_perp");
    if (auto v = get(*sec, "file")) {
      std::filesystem::path file(*v);
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      s.matrix = load_matrix_file(file);
    } else if (s.kind == StateSpec::Kind::matrix) {
      throw ConfigError("state.file", "matrix state needs a file");
    }
  }

  if (auto sec = tree.get_child_optional("bipartite")) {
    reject_unknown(*sec, "bipartite.", {"alpha", "alpha_im", "beta", "beta_im"});
    config.alpha = parse_complex(*sec, "bipartite.", "alpha", config.alpha);
    config.beta = parse_complex(*sec, "bipartite.", "beta", config.beta);
  }

  if (auto sec = tree.get_child_optional("copies")) {
    reject_unknown(*sec, "copies.", {"l"});
    if (auto v = get(*sec, "l")) config.copies = parse_count(*v, "copies.l");
  }

  if (auto sec = tree.get_child_optional("sweep")) {
    static const std::set<std::string> kAxes{"theta", "n", "d", "p", "gamma_sq"};
    for (const auto& [key, child] : *sec) {
      const std::string field = "sweep." + key;
      const std::string value = trim(child.data());
      if (key == "base") {
        auto kind = parse_kind(value);
        if (!kind) throw ConfigError(field, "unknown experiment kind '" + value + "'");
        config.base = *kind;
        continue;
      }
      if (!kAxes.contains(key)) throw ConfigError(field, "unknown sweep axis");
      auto values = parse_axis(value, field);
      if (values.empty()) throw ConfigError(field, "empty axis");
      config.axes.push_back({key, std::move(values)});
    }
  } else if (config.kind == ExperimentKind::sweep) {
    throw ConfigError("sweep", "sweep experiment needs a [sweep] section");
  }

  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

}  // namespace qsteer
