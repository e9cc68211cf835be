// Experiment harness: configuration, deterministic sweep execution, scaling
// fits, and CSV/SVG emission. Output is a pure function of (config, seeds):
// worker scheduling is a static partition of grid points and the writer
// drains results in grid order.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpd/adversary.hpp"
#include "qpd/discriminators.hpp"
#include "qpd/distributions.hpp"
#include "qpd/oracles.hpp"

namespace qpd {

enum class Algorithm { model3, model4, classical, standard };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::model3: return "model3";
    case Algorithm::model4: return "model4";
    case Algorithm::classical: return "classical";
    case Algorithm::standard: return "standard";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "model3") return Algorithm::model3;
  if (s == "model4") return Algorithm::model4;
  if (s == "classical") return Algorithm::classical;
  if (s == "standard") return Algorithm::standard;
  throw std::invalid_argument("unknown algorithm: " + s);
}

inline OracleModel oracle_model_from_string(const std::string& s) {
  if (s == "i") return OracleModel::model_i;
  if (s == "ii") return OracleModel::model_ii;
  if (s == "iii") return OracleModel::model_iii;
  if (s == "iv") return OracleModel::model_iv;
  throw std::invalid_argument("unknown oracle model: " + s);
}

struct ExperimentConfig {
  std::vector<FamilySpec> grid;
  std::vector<OracleModel> models;
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds;
  double error_target = 1.0 / 3.0;
  AlgoParams params;
  GarbageKind garbage = GarbageKind::trivial;
  Index d_f = 1;
  Index string_length = 20;  // lifted models (i) and (ii)
  int workers = 1;
  std::string output_csv;
  std::string output_svg;

  void validate() const {
    if (grid.empty()) throw std::invalid_argument("ExperimentConfig: empty parameter grid");
    if (models.empty()) throw std::invalid_argument("ExperimentConfig: no models");
    if (algorithms.empty()) throw std::invalid_argument("ExperimentConfig: no algorithms");
    if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: empty seed list");
    for (std::size_t i = 0; i < seeds.size(); ++i)
      for (std::size_t j = i + 1; j < seeds.size(); ++j)
        if (seeds[i] == seeds[j]) throw std::invalid_argument("ExperimentConfig: repeated seed");
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
    params.validate();
  }
};

struct ExperimentRecord {
  std::string family;
  double param = 0.0;
  double d_hellinger = 0.0;
  double alpha = 0.0;
  std::string model;
  std::string algorithm;
  std::string garbage;
  std::uint64_t seed = 0;
  std::string hidden;
  std::string decision;
  int correct = 0;
  std::int64_t queries_or_samples = 0;
  double witness_t = 0.0;
  double certificate_ratio = 0.0;
  std::string status = "ok";
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline double family_param(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::collision: return static_cast<double>(spec.n);
    case FamilyKind::tiered: return static_cast<double>(spec.t);
    case FamilyKind::bernoulli: return spec.theta_q;
    case FamilyKind::custom: return 0.0;
  }
  return 0.0;
}

inline bool compatible(OracleModel model, Algorithm algo) {
  switch (algo) {
    case Algorithm::model3: return model == OracleModel::model_iii;
    case Algorithm::model4: return true;  // any state-generating access
    case Algorithm::classical: return true;
    case Algorithm::standard: return true;
  }
  return false;
}

/// Oracle for the hidden distribution under the requested access model.
/// Models (i)/(ii) go through a string of length `n` lifted to a state
/// oracle; model (i) requires the probabilities to be multiples of 1/n.
inline DiscriminationInstance instance_for_model(const ProbDist& p, const ProbDist& q,
                                                 OracleModel model, GarbageKind kind, Index d_f,
                                                 HiddenLabel hidden, std::uint64_t seed,
                                                 Index n) {
  if (model == OracleModel::model_iii || model == OracleModel::model_iv)
    return make_instance(p, q, model, kind, d_f, hidden, seed);
  const ProbDist& encoded = hidden == HiddenLabel::P ? p : q;
  const Index alphabet = static_cast<Index>(p.alphabet_size());
  OracleInstance oracle;
  if (model == OracleModel::model_i) {
    oracle = lift_string_oracle(string_for_distribution(encoded, n), alphabet,
                                OracleModel::model_i, hidden);
  } else {
    Rng rng(seed, 0x57121);
    oracle = lift_iid_oracle(encoded, n, rng, hidden);
  }
  // Lifted garbage is the index superposition; the trivial recipe with the
  // same dimension is the declared candidate for witness construction.
  return DiscriminationInstance{p, q, std::move(oracle),
                                GarbageSpec{GarbageKind::trivial, n, 0, 0},
                                GarbageSpec{GarbageKind::trivial, n, 0, 1}};
}

}  // namespace detail

/// One discrimination run; queries_or_samples is the oracle counter delta
/// (or the classical sample count).
inline ExperimentRecord run_single(const FamilySpec& spec, OracleModel model, Algorithm algo,
                                   std::uint64_t seed, const ExperimentConfig& config) {
  ExperimentRecord rec;
  rec.family = spec.label();
  rec.param = detail::family_param(spec);
  rec.model = to_string(model);
  rec.algorithm = to_string(algo);
  rec.garbage = to_string(config.garbage);
  rec.seed = seed;
  try {
    const auto [p, q] = generate(spec);
    const DistMetrics m = metrics(p, q);
    rec.d_hellinger = m.hellinger;
    rec.alpha = m.angle;

    const HiddenLabel hidden = seed % 2 == 0 ? HiddenLabel::P : HiddenLabel::Q;
    rec.hidden = to_string(hidden);
    Rng rng(seed, detail::fnv1a(rec.family + '|' + rec.model + '|' + rec.algorithm));

    DiscriminationOutcome outcome;
    if (algo == Algorithm::classical) {
      const ProbDist& encoded = hidden == HiddenLabel::P ? p : q;
      Rng sample_rng(seed, 0xC1A55);
      const ClassicalOutcome c = classical_discriminate(
          p, q, [&]() { return sample(encoded, sample_rng); }, config.error_target, rng);
      outcome.decision = c.decision;
      outcome.queries_used = c.samples_used;
    } else {
      DiscriminationInstance inst = detail::instance_for_model(
          p, q, model, config.garbage, config.d_f, hidden, seed, config.string_length);
      if (algo == Algorithm::model3) {
        outcome = discriminate_model3(inst, rng, config.params);
      } else if (algo == Algorithm::model4) {
        outcome = discriminate_model4(inst, rng, config.params);
      } else {
        // restricted all-ones weights on the symbols where p dominates
        std::vector<double> c(p.alphabet_size(), 0.0);
        for (std::size_t a = 0; a < c.size(); ++a) c[a] = p[a] > q[a] ? 1.0 : 0.0;
        outcome = standard_method(inst, c, rng);
      }
    }
    rec.decision = to_string(outcome.decision);
    rec.correct = outcome.decision == hidden ? 1 : 0;
    rec.queries_or_samples = outcome.queries_used;

    const Gamma2Witness w =
        build_witness(p, q, GarbageSpec{GarbageKind::trivial, 1, 0, 0},
                      GarbageSpec{GarbageKind::trivial, 1, 0, 1});
    rec.witness_t = w.objective;
    // Benchmark certificate ratio at the canonical one-third error statistics.
    // Skipped (0) above 256 symbols, where the per-row dense SVD gets costly.
    if (p.alphabet_size() <= 256)
      rec.certificate_ratio =
          lower_bound_certificate(p, q, 1, 2.0 / 3.0, 1.0 / 3.0).tensor.value;
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

/// Run the full sweep. Grid points are assigned to workers by index modulo
/// the worker count; the writer appends finished points in grid order and
/// flushes after each one, so the CSV is byte-identical for any worker count
/// and crash-safe up to the last completed grid point.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                                    std::ostream* csv_sink = nullptr);

// ---------------------------------------------------------------------------
// Scaling fits

struct ScalingFit {
  double slope = 0.0;
  double r2 = 0.0;
};

/// Log-log least squares of y against x. Points sharing an x value are
/// averaged first. Requires >= 4 distinct x spanning at least a factor 4.
inline ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  std::map<double, std::pair<double, int>> grouped;
  for (const auto& [x, y] : points) {
    if (x <= 0.0 || y <= 0.0)
      throw std::invalid_argument("fit_scaling: coordinates must be positive");
    auto& slot = grouped[x];
    slot.first += y;
    slot.second += 1;
  }
  if (grouped.size() < 4)
    throw std::invalid_argument("fit_scaling: need at least 4 distinct grid points");
  const double x_min = grouped.begin()->first;
  const double x_max = grouped.rbegin()->first;
  if (x_max < 4.0 * x_min)
    throw std::invalid_argument("fit_scaling: degenerate x-range (needs a 4x span)");

  std::vector<double> lx, ly;
  for (const auto& [x, acc] : grouped) {
    lx.push_back(std::log(x));
    ly.push_back(std::log(acc.first / acc.second));
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

/// Fit of cost against 1/d_H restricted to one (algorithm, model) series.
inline ScalingFit fit_scaling(const std::vector<ExperimentRecord>& records,
                              const std::string& algorithm, const std::string& model) {
  std::vector<std::pair<double, double>> points;
  for (const auto& r : records) {
    if (r.status != "ok" || r.algorithm != algorithm || r.model != model) continue;
    points.emplace_back(1.0 / r.d_hellinger, static_cast<double>(r.queries_or_samples));
  }
  return fit_scaling(points);
}

// ---------------------------------------------------------------------------
// CSV

inline const char* csv_header() {
  return "# qpd-csv v1: family,param,d_hellinger,alpha,model,algorithm,garbage,seed,hidden,"
         "decision,correct,queries_or_samples,witness_T,certificate_ratio,status\n"
         "family,param,d_hellinger,alpha,model,algorithm,garbage,seed,hidden,decision,correct,"
         "queries_or_samples,witness_T,certificate_ratio,status\n";
}

inline std::string csv_row(const ExperimentRecord& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  std::string status = r.status;
  for (char& ch : status)
    if (ch == ',' || ch == '\n') ch = ';';
  os << r.family << ',' << r.param << ',' << r.d_hellinger << ',' << r.alpha << ',' << r.model
     << ',' << r.algorithm << ',' << r.garbage << ',' << r.seed << ',' << r.hidden << ','
     << r.decision << ',' << r.correct << ',' << r.queries_or_samples << ',' << r.witness_t
     << ',' << r.certificate_ratio << ',' << status << '\n';
  return os.str();
}

inline std::string render_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = csv_header();
  for (const auto& r : records) out += csv_row(r);
  return out;
}

inline std::vector<ExperimentRecord> parse_csv(std::istream& in) {
  std::vector<ExperimentRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() < 15) throw std::invalid_argument("parse_csv: malformed row: " + line);
    ExperimentRecord r;
    r.family = f[0];
    r.param = std::stod(f[1]);
    r.d_hellinger = std::stod(f[2]);
    r.alpha = std::stod(f[3]);
    r.model = f[4];
    r.algorithm = f[5];
    r.garbage = f[6];
    r.seed = std::stoull(f[7]);
    r.hidden = f[8];
    r.decision = f[9];
    r.correct = std::stoi(f[10]);
    r.queries_or_samples = std::stoll(f[11]);
    r.witness_t = std::stod(f[12]);
    r.certificate_ratio = std::stod(f[13]);
    r.status = f[14];
    records.push_back(std::move(r));
  }
  return records;
}

// ---------------------------------------------------------------------------
// SVG scatter (log-log, one series per algorithm/model pair)

inline std::string render_svg(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw std::invalid_argument("render_svg: no records");
  struct Pt {
    double x, y;
  };
  std::map<std::string, std::vector<Pt>> series;
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const auto& r : records) {
    if (r.status != "ok" || r.d_hellinger <= 0.0 || r.queries_or_samples <= 0) continue;
    const double x = std::log10(1.0 / r.d_hellinger);
    const double y = std::log10(static_cast<double>(r.queries_or_samples));
    series[r.algorithm + "/" + r.model].push_back({x, y});
    x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
  }
  if (series.empty()) throw std::invalid_argument("render_svg: no plottable records");
  if (x_hi - x_lo < 1e-9) { x_lo -= 0.5; x_hi += 0.5; }
  if (y_hi - y_lo < 1e-9) { y_lo -= 0.5; y_hi += 0.5; }

  const double w = 640.0, h = 480.0, ml = 60.0, mr = 20.0, mt = 20.0, mb = 50.0;
  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y_lo) / (y_hi - y_lo) * (h - mt - mb); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
      << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(h - mb) << "\" x2=\"" << fmt(w - mr)
      << "\" y2=\"" << fmt(h - mb) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml)
      << "\" y2=\"" << fmt(h - mb) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fmt((ml + w - mr) / 2) << "\" y=\"" << fmt(h - 12)
      << "\" font-size=\"13\" text-anchor=\"middle\">log10(1 / d_H)</text>\n"
      << "<text x=\"14\" y=\"" << fmt((mt + h - mb) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt((mt + h - mb) / 2) << ")\">log10(queries)</text>\n";
  // axis ticks at the extremes
  for (double x : {x_lo, x_hi})
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(h - mb + 16)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  for (double y : {y_lo, y_hi})
    svg << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(py(y) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y) << "</text>\n";

  int color = 0;
  double legend_y = mt + 14;
  for (const auto& [name, pts] : series) {
    const char* stroke = palette[color % 6];
    // mean y per x as a polyline
    std::map<double, std::pair<double, int>> mean;
    for (const auto& p : pts) {
      mean[p.x].first += p.y;
      mean[p.x].second += 1;
    }
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, acc] : mean)
      svg << fmt(px(x)) << ',' << fmt(py(acc.first / acc.second)) << ' ';
    svg << "\"/>\n";
    for (const auto& p : pts)
      svg << "<circle cx=\"" << fmt(px(p.x)) << "\" cy=\"" << fmt(py(p.y))
          << "\" r=\"2.5\" fill=\"" << stroke << "\" fill-opacity=\"0.55\"/>\n";
    svg << "<text x=\"" << fmt(w - mr - 8) << "\" y=\"" << fmt(legend_y)
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << stroke << "\">" << name
        << "</text>\n";
    legend_y += 16;
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// Sweep driver

inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                                    std::ostream* csv_sink) {
  config.validate();
  const std::size_t points = config.grid.size();
  std::vector<std::vector<ExperimentRecord>> slots(points);
  std::vector<std::atomic<bool>> done(points);
  for (auto& d : done) d.store(false);

  auto process_point = [&](std::size_t gi) {
    std::vector<ExperimentRecord> rows;
    for (OracleModel model : config.models)
      for (Algorithm algo : config.algorithms) {
        if (!detail::compatible(model, algo)) continue;
        for (std::uint64_t seed : config.seeds)
          rows.push_back(run_single(config.grid[gi], model, algo, seed, config));
      }
    slots[gi] = std::move(rows);
    done[gi].store(true, std::memory_order_release);
  };

  const int workers = std::min<int>(config.workers, static_cast<int>(points));
  if (workers <= 1) {
    std::vector<ExperimentRecord> all;
    if (csv_sink) *csv_sink << csv_header();
    for (std::size_t gi = 0; gi < points; ++gi) {
      process_point(gi);
      for (const auto& r : slots[gi]) {
        if (csv_sink) *csv_sink << csv_row(r);
        all.push_back(r);
      }
      if (csv_sink) csv_sink->flush();
    }
    return all;
  }

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      for (std::size_t gi = static_cast<std::size_t>(w); gi < points;
           gi += static_cast<std::size_t>(workers))
        process_point(gi);
    });

  // Single-writer stage: drain grid points in order as they complete.
  std::vector<ExperimentRecord> all;
  if (csv_sink) *csv_sink << csv_header();
  for (std::size_t gi = 0; gi < points; ++gi) {
    while (!done[gi].load(std::memory_order_acquire)) std::this_thread::yield();
    for (const auto& r : slots[gi]) {
      if (csv_sink) *csv_sink << csv_row(r);
      all.push_back(r);
    }
    if (csv_sink) csv_sink->flush();
  }
  for (auto& t : pool) t.join();
  return all;
}

// ---------------------------------------------------------------------------
// Config file (JSON)

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  const auto& fam = j.at("family");
  const std::string kind = fam.at("kind").get<std::string>();
  auto as_list = [](const nlohmann::json& v) {
    std::vector<nlohmann::json> out;
    if (v.is_array())
      for (const auto& e : v) out.push_back(e);
    else
      out.push_back(v);
    return out;
  };
  if (kind == "bernoulli") {
    for (const auto& tq : as_list(fam.at("theta_q"))) {
      FamilySpec spec;
      spec.kind = FamilyKind::bernoulli;
      spec.theta_p = fam.value("theta_p", 0.5);
      spec.theta_q = tq.get<double>();
      config.grid.push_back(spec);
    }
  } else if (kind == "collision") {
    for (const auto& n : as_list(fam.at("n"))) {
      FamilySpec spec;
      spec.kind = FamilyKind::collision;
      spec.n = n.get<int>();
      config.grid.push_back(spec);
    }
  } else if (kind == "tiered") {
    for (const auto& t : as_list(fam.at("t"))) {
      FamilySpec spec;
      spec.kind = FamilyKind::tiered;
      spec.t = t.get<int>();
      config.grid.push_back(spec);
    }
  } else {
    throw std::invalid_argument("config: unknown family kind: " + kind);
  }

  for (const auto& m : j.at("models")) config.models.push_back(oracle_model_from_string(m));
  for (const auto& a : j.at("algorithms"))
    config.algorithms.push_back(algorithm_from_string(a));
  if (j.at("seeds").is_array()) {
    for (const auto& s : j.at("seeds")) config.seeds.push_back(s.get<std::uint64_t>());
  } else {
    const auto base = j.at("seeds").value("base", 1ULL);
    const auto count = j.at("seeds").at("count").get<std::uint64_t>();
    for (std::uint64_t s = 0; s < count; ++s) config.seeds.push_back(base + s);
  }
  config.error_target = j.value("error_target", 1.0 / 3.0);
  config.params.epsilon = j.value("epsilon", config.params.epsilon);
  config.params.kappa = j.value("kappa", config.params.kappa);
  if (j.contains("garbage")) {
    const std::string g = j.at("garbage").value("kind", "trivial");
    if (g == "trivial") config.garbage = GarbageKind::trivial;
    else if (g == "haar") config.garbage = GarbageKind::haar_random;
    else if (g == "adversarial") config.garbage = GarbageKind::orthogonal_adversarial;
    else throw std::invalid_argument("config: unknown garbage kind: " + g);
    config.d_f = j.at("garbage").value("d_f", static_cast<Index>(1));
  }
  config.string_length = j.value("string_length", static_cast<Index>(20));
  config.workers = j.value("workers", 1);
  config.output_csv = j.value("output_csv", std::string{});
  config.output_svg = j.value("output_svg", std::string{});
  return config;
}

}  // namespace qpd
