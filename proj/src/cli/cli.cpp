/*
 * Copyright 2026 The RankSHAP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankshap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rankshap/aggregate.hpp"
#include "rankshap/engine.hpp"
#include "rankshap/io.hpp"
#include "rankshap/metrics.hpp"
#include "rankshap/report.hpp"
#include "rankshap/synth.hpp"

namespace rankshap {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Flags {
  std::string data;
  std::string ids = "auto";
  std::string scorer;
  std::string qoi = "rank";
  std::string k;
  std::string item;
  std::string pair;
  std::string samples = "exact";
  std::string max_coalition = "all";
  std::string sampling = "row-joint";
  std::string seed = "0";
  int strata = 10;
  int jobs = 1;
  std::string out;
  std::string render;
  std::string display_sign = "efficiency";
  std::vector<std::string> explanations;
  std::string builtin;
  std::string spec;
  Index n = 2000;
  std::string neighbors = "feature-knn";
  Index neighbor_count = 10;
  std::string similarity = "kendall";
  std::string triples;
  std::vector<std::string> sweep_samples{"20", "50", "100", "500", "exact"};
  std::vector<std::string> sweep_coalition{"all"};
  Index bench_items = 100;
};

Index parse_index(std::string_view text, const char* what) {
  Index value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(std::string(what) + ": '" + std::string(text) +
                          "' is not an integer");
  }
  return value;
}

void emit(const Flags& f, std::string_view text, std::ostream& out) {
  if (f.out.empty()) {
    out << text;
  } else {
    write_text_file(f.out, text);
  }
}

Dataset load_dataset(const Flags& f) {
  if (f.data.empty()) throw ValidationError("--data is required");
  std::optional<bool> ids;
  if (f.ids == "yes") ids = true;
  else if (f.ids == "no") ids = false;
  else if (f.ids != "auto") {
    throw ValidationError("--ids must be auto, yes or no");
  }
  return read_dataset_csv(f.data, ids);
}

ScoringFunction load_scorer(const Flags& f, const Dataset& data) {
  if (f.scorer.empty()) throw ValidationError("--scorer is required");
  ScoringFunction scorer = [&] {
    if (fs::exists(f.scorer)) {
      return parse_scorer_config(read_text_file(f.scorer),
                                 data.feature_names());
    }
    if (f.scorer == "csrankings") return ScoringFunction::csrankings();
    if (f.scorer == "atp") return ScoringFunction::atp();
    if (f.scorer.size() == 2 && f.scorer[0] == 'f') {
      return builtin_scorer(f.scorer);
    }
    throw IoError("cannot open scorer config '" + f.scorer + "'");
  }();
  scorer.check_compatible(data.num_features());
  return scorer;
}

QoIKind build_qoi(const Flags& f, Index n) {
  std::optional<Index> k;
  if (!f.k.empty()) k = parse_k(f.k, n);
  const QoIKind qoi = QoIKind::parse(f.qoi, k);
  qoi.validate(n);
  return qoi;
}

EngineOptions build_options(const Flags& f) {
  EngineOptions opts;
  opts.samples = parse_samples(f.samples);
  if (f.max_coalition != "all") {
    opts.max_coalition =
        static_cast<int>(parse_index(f.max_coalition, "--max-coalition"));
  }
  opts.sampling = parse_sampling_mode(f.sampling);
  opts.seed = parse_seed(f.seed);
  opts.parallelism = f.jobs;
  return opts;
}

Index resolve(const Dataset& data, const std::string& selector,
              const char* flag) {
  if (selector.empty()) {
    throw ValidationError(std::string(flag) + " is required");
  }
  const auto idx = data.find(selector);
  if (!idx) {
    throw ValidationError(std::string(flag) + ": unknown item '" + selector +
                          "'");
  }
  return *idx;
}

fs::path sibling(const std::string& out, const char* extension) {
  if (out.empty()) {
    throw ValidationError("--out is required to emit rendered output");
  }
  return fs::path(out).replace_extension(extension);
}

int cmd_explain(const Flags& f, std::ostream& out) {
  const Dataset data = load_dataset(f);
  const ScoringFunction scorer = load_scorer(f, data);
  const QoIKind qoi = build_qoi(f, data.size());
  const EngineOptions opts = build_options(f);
  const Index v = resolve(data, f.item, "--item");
  ExplanationVector e;
  if (qoi.is_pairwise()) {
    e = explain_pair(data, v, resolve(data, f.pair, "--pair"), qoi, scorer,
                     opts);
  } else {
    if (!f.pair.empty()) {
      throw ValidationError("--pair applies to pairwise QoIs only");
    }
    e = explain_item(data, v, qoi, scorer, opts);
  }
  const auto doc = make_document(data, {e});
  if (!f.render.empty()) {
    if (f.render != "waterfall") {
      throw ValidationError("--render must be 'waterfall'");
    }
    const auto path = sibling(f.out, ".svg");
    std::string title = qoi.name() + " of " + data.label(v);
    if (e.partner) title += " vs " + data.label(*e.partner);
    write_text_file(path, waterfall_svg(e, data.feature_names(), title,
                                        parse_display_sign(f.display_sign)));
  }
  emit(f, document_json(doc, &data), out);
  return kExitOk;
}

int cmd_explain_all(const Flags& f, std::ostream& out) {
  const Dataset data = load_dataset(f);
  const ScoringFunction scorer = load_scorer(f, data);
  const QoIKind qoi = build_qoi(f, data.size());
  if (qoi.is_pairwise()) {
    throw ValidationError("explain-all takes a per-item QoI; use explain "
                          "--item/--pair for pairs");
  }
  const EngineOptions opts = build_options(f);
  auto expls = explain_all(data, qoi, scorer, opts);
  emit(f, document_json(make_document(data, std::move(expls)), &data), out);
  return kExitOk;
}

ExplanationDocument load_document(const std::string& path, const Dataset& data) {
  ExplanationDocument doc = read_explanations(path);
  check_fingerprint(doc, data);
  return doc;
}

int cmd_aggregate(const Flags& f, std::ostream& out) {
  const Dataset data = load_dataset(f);
  const ScoringFunction scorer = load_scorer(f, data);
  const DisplaySign sign = parse_display_sign(f.display_sign);
  std::vector<ExplanationVector> expls;
  QoIKind qoi;
  if (f.explanations.size() > 1) {
    throw ValidationError("aggregate takes at most one --explanations file");
  }
  if (!f.explanations.empty()) {
    auto doc = load_document(f.explanations.front(), data);
    qoi = doc.qoi;
    expls = std::move(doc.records);
  } else {
    qoi = build_qoi(f, data.size());
    if (qoi.is_pairwise()) {
      throw ValidationError("aggregate takes a per-item QoI");
    }
    expls = explain_all(data, qoi, scorer, build_options(f));
  }
  if (f.strata < 1 || f.strata > data.size()) {
    throw ValidationError("--strata must lie in [1, " +
                          std::to_string(data.size()) + "]");
  }
  const Ranking ranking = rank_all(scorer, data);
  const auto summaries = stratify_aggregate(
      apply_display_sign(std::move(expls), sign), ranking, f.strata);
  emit(f, strata_csv(summaries, data.feature_names()), out);
  if (!f.out.empty()) {
    write_text_file(sibling(f.out, ".plot.json"),
                    strata_plot_json(summaries, data.feature_names(),
                                     data.size(), f.strata, qoi, sign));
  }
  return kExitOk;
}

int cmd_metrics(const Flags& f, std::ostream& out) {
  const Dataset data = load_dataset(f);
  const ScoringFunction scorer = load_scorer(f, data);
  if (f.explanations.empty()) {
    throw ValidationError("metrics needs at least one --explanations file");
  }
  std::vector<ExplanationDocument> docs;
  for (const auto& path : f.explanations) {
    docs.push_back(load_document(path, data));
  }
  const Ranking ranking = rank_all(scorer, data);

  Json report;
  Json entries = Json::array();
  for (std::size_t t = 0; t < docs.size(); ++t) {
    Json entry = {{"path", f.explanations[t]},
                  {"qoi", docs[t].qoi.name()},
                  {"options", docs[t].options},
                  {"records", docs[t].records.size()}};
    if (!docs[t].records.empty()) {
      entry["method_fidelity"] =
          method_fidelity(docs[t].records, data, docs[t].qoi, scorer);
    }
    entries.push_back(std::move(entry));
  }
  report["documents"] = std::move(entries);

  Json agreement;
  for (const SimilarityKind kind : kAllSimilarityKinds) {
    Json matrix = Json::array();
    for (const auto& a : docs) {
      Json row = Json::array();
      for (const auto& b : docs) {
        row.push_back(method_agreement(a.records, b.records, kind));
      }
      matrix.push_back(std::move(row));
    }
    agreement[to_string(kind)] = std::move(matrix);
  }
  report["agreement"] = std::move(agreement);

  const auto& first = docs.front();
  if (!first.qoi.is_pairwise() &&
      static_cast<Index>(first.records.size()) == data.size()) {
    NeighborSpec nbr;
    if (f.neighbors == "feature-knn") {
      nbr.kind = NeighborSpec::Kind::kFeatureKnn;
    } else if (f.neighbors == "rank-window") {
      nbr.kind = NeighborSpec::Kind::kRankWindow;
    } else {
      throw ValidationError("--neighbors must be feature-knn or rank-window");
    }
    nbr.count = f.neighbor_count;
    const SimilarityKind kind = parse_similarity_kind(f.similarity);
    const auto sens = sensitivity(data, first.records, nbr, kind, ranking);
    report["sensitivity"] = {{"neighbors", f.neighbors},
                             {"count", nbr.count},
                             {"similarity", to_string(kind)},
                             {"score", sens.score}};
    if (!f.triples.empty()) {
      write_text_file(f.triples, triples_csv(sens.triples, data));
    }
  } else if (!f.triples.empty()) {
    throw ValidationError(
        "sensitivity needs a per-item document covering every item");
  }
  emit(f, report.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_synth(const Flags& f, std::ostream& out) {
  SyntheticSpec spec;
  if (!f.builtin.empty() == !f.spec.empty()) {
    throw ValidationError("synth needs exactly one of --builtin or --spec");
  }
  if (!f.builtin.empty()) {
    spec = builtin_spec(f.builtin, f.n, parse_seed(f.seed));
  } else {
    spec = parse_synthetic_spec(read_text_file(f.spec));
  }
  emit(f, dataset_csv(generate_synthetic(spec)), out);
  return kExitOk;
}

int cmd_bench(const Flags& f, std::ostream& out) {
  const Dataset data = load_dataset(f);
  const ScoringFunction scorer = load_scorer(f, data);
  const QoIKind qoi = build_qoi(f, data.size());
  if (qoi.is_pairwise()) throw ValidationError("bench takes a per-item QoI");
  const EngineOptions base = build_options(f);
  const Index count = std::min(f.bench_items, data.size());
  if (count < 1) throw ValidationError("--items must be positive");
  std::vector<Index> items;
  for (Index t = 0; t < count; ++t) items.push_back(t * data.size() / count);

  const auto ranking = std::make_shared<const Ranking>(rank_all(scorer, data));
  auto run = [&](const EngineOptions& opts, double& seconds) {
    std::vector<ExplanationVector> expls;
    const auto start = std::chrono::steady_clock::now();
    for (const Index v : items) {
      expls.push_back(explain_item(data, v, qoi, scorer, opts, ranking));
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start).count();
    return expls;
  };

  struct Config {
    std::optional<Index> samples;
    std::optional<int> coalition;
  };
  std::vector<Config> configs;
  for (const auto& c : f.sweep_coalition) {
    std::optional<int> bound;
    if (c != "all") bound = static_cast<int>(parse_index(c, "--sweep-coalition"));
    for (const auto& s : f.sweep_samples) {
      configs.push_back({parse_samples(s), bound});
    }
  }
  for (const auto& c : configs) {
    EngineOptions o = base;
    o.samples = c.samples;
    o.max_coalition = c.coalition;
    o.validate(data.size(), data.num_features());
  }

  EngineOptions exact = base;
  exact.samples.reset();
  exact.max_coalition.reset();
  double exact_seconds = 0.0;
  const auto reference = run(exact, exact_seconds);

  std::string csv =
      "samples,max_coalition,items,seconds_per_item,speedup,fidelity,"
      "agree_kendall,agree_jaccard_top2,agree_euclid_unit\n";
  for (const auto& c : configs) {
    EngineOptions o = base;
    o.samples = c.samples;
    o.max_coalition = c.coalition;
    double seconds = exact_seconds;
    std::vector<ExplanationVector> expls;
    if (o.exact() && !o.max_coalition) {
      expls = reference;
    } else {
      expls = run(o, seconds);
    }
    csv += (c.samples ? std::to_string(*c.samples) : std::string("exact")) +
           ',' +
           (c.coalition ? std::to_string(*c.coalition) : std::string("all")) +
           ',' + std::to_string(count) + ',' +
           format_double(seconds / static_cast<double>(count)) + ',' +
           format_double(seconds > 0.0 ? exact_seconds / seconds : 1.0) + ',' +
           format_double(method_fidelity(expls, data, qoi, scorer));
    for (const SimilarityKind kind : kAllSimilarityKinds) {
      csv += ',' + format_double(method_agreement(reference, expls, kind));
    }
    csv += '\n';
  }
  emit(f, csv, out);
  return kExitOk;
}

int cmd_render(const Flags& f, std::ostream& out) {
  if (f.explanations.size() != 1) {
    throw ValidationError("render needs exactly one --explanations file");
  }
  ExplanationDocument doc = read_explanations(f.explanations.front());
  std::optional<Dataset> data;
  if (!f.data.empty()) {
    data.emplace(load_dataset(f));
    check_fingerprint(doc, *data);
  }
  if (doc.records.empty()) throw ValidationError("document has no records");
  const DisplaySign sign = parse_display_sign(f.display_sign);
  const std::string kind = f.render.empty() ? "waterfall" : f.render;
  auto label = [&](Index i) {
    return data ? data->label(i) : std::to_string(i);
  };
  if (kind == "pairwise-bars") {
    if (!data) throw ValidationError("pairwise-bars needs --data for labels");
    emit(f, pairwise_bars_json(doc.records, *data, sign), out);
    return kExitOk;
  }
  if (kind != "waterfall") {
    throw ValidationError("--render must be waterfall or pairwise-bars");
  }
  const ExplanationVector* chosen = &doc.records.front();
  if (!f.item.empty()) {
    const Index v = data ? resolve(*data, f.item, "--item")
                         : parse_index(f.item, "--item");
    const auto it = std::find_if(doc.records.begin(), doc.records.end(),
                                 [&](const auto& e) { return e.subject == v; });
    if (it == doc.records.end()) {
      throw ValidationError("--item: no record for '" + f.item + "'");
    }
    chosen = &*it;
  }
  std::string title = doc.qoi.name() + " of " + label(chosen->subject);
  if (chosen->partner) title += " vs " + label(*chosen->partner);
  emit(f, waterfall_svg(*chosen, doc.dataset.feature_names, title, sign), out);
  return kExitOk;
}

void add_data(CLI::App* sub, Flags& f) {
  sub->add_option("--data", f.data, "Dataset CSV (header row first)");
  sub->add_option("--ids", f.ids, "First column holds ids: auto|yes|no")
      ->capture_default_str();
  sub->add_option("--scorer", f.scorer,
                  "Scorer config JSON, or f1..f4, csrankings, atp");
}

void add_qoi(CLI::App* sub, Flags& f) {
  sub->add_option("--qoi", f.qoi,
                  "score|rank|topk|pairwise-score|pairwise-rank|pairwise-topk")
      ->capture_default_str();
  sub->add_option("--k", f.k, "Top-k size: INT or PCT (e.g. 10%)");
}

void add_engine(CLI::App* sub, Flags& f) {
  sub->add_option("--samples", f.samples, "Samples per coalition, or exact")
      ->capture_default_str();
  sub->add_option("--max-coalition", f.max_coalition,
                  "Largest randomized coalition, or all")
      ->capture_default_str();
  sub->add_option("--sampling", f.sampling, "row-joint|independent")
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "64-bit seed")->capture_default_str();
  sub->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();
}

void add_out(CLI::App* sub, Flags& f) {
  sub->add_option("--out", f.out, "Output path (default: stdout)");
}

void add_display(CLI::App* sub, Flags& f) {
  sub->add_option("--display-sign", f.display_sign, "efficiency|presentation")
      ->capture_default_str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Flags f;
  CLI::App app{"Shapley-value explanations for score-based rankings",
               "rankshap"};
  app.require_subcommand(1);

  auto* explain = app.add_subcommand("explain", "Explain one item or pair");
  add_data(explain, f);
  add_qoi(explain, f);
  add_engine(explain, f);
  add_out(explain, f);
  add_display(explain, f);
  explain->add_option("--item", f.item, "Item id or row index");
  explain->add_option("--pair", f.pair, "Partner item for pairwise QoIs");
  explain->add_option("--render", f.render, "Also write an SVG: waterfall");

  auto* all = app.add_subcommand("explain-all", "Explain every item");
  add_data(all, f);
  add_qoi(all, f);
  add_engine(all, f);
  add_out(all, f);

  auto* aggregate = app.add_subcommand(
      "aggregate", "Box statistics per ranking stratum");
  add_data(aggregate, f);
  add_qoi(aggregate, f);
  add_engine(aggregate, f);
  add_out(aggregate, f);
  add_display(aggregate, f);
  aggregate->add_option("--explanations", f.explanations,
                        "Explanation document (computed in-line if absent)");
  aggregate->add_option("--strata", f.strata, "Number of strata")
      ->capture_default_str();

  auto* metrics = app.add_subcommand(
      "metrics", "Fidelity, agreement and sensitivity");
  add_data(metrics, f);
  add_out(metrics, f);
  metrics->add_option("--explanations", f.explanations,
                      "Explanation documents (repeatable)");
  metrics->add_option("--neighbors", f.neighbors, "feature-knn|rank-window")
      ->capture_default_str();
  metrics->add_option("--neighbor-count", f.neighbor_count,
                      "Neighbours per item, or rank window half-width")
      ->capture_default_str();
  metrics->add_option("--similarity", f.similarity,
                      "kendall|jaccard-top2|euclid-unit")
      ->capture_default_str();
  metrics->add_option("--triples", f.triples, "Sensitivity scatter CSV path");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_out(synth, f);
  synth->add_option("--builtin", f.builtin,
                    "D1..D5, G3-indep, G3-neg, G3-mixed");
  synth->add_option("--spec", f.spec, "Synthetic spec JSON path");
  synth->add_option("--n", f.n, "Items")->capture_default_str();
  synth->add_option("--seed", f.seed, "64-bit seed")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Runtime and quality sweep");
  add_data(bench, f);
  add_qoi(bench, f);
  add_engine(bench, f);
  add_out(bench, f);
  bench->add_option("--sweep-samples", f.sweep_samples,
                    "Sample counts (and/or exact)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--sweep-coalition", f.sweep_coalition,
                    "Coalition bounds (and/or all)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--items", f.bench_items, "Items timed per configuration")
      ->capture_default_str();

  auto* render = app.add_subcommand("render", "Render an explanation document");
  add_out(render, f);
  add_display(render, f);
  render->add_option("--data", f.data, "Dataset CSV (for labels)");
  render->add_option("--ids", f.ids, "First column holds ids: auto|yes|no");
  render->add_option("--explanations", f.explanations, "Explanation document");
  render->add_option("--item", f.item, "Record to draw");
  render->add_option("--render", f.render, "waterfall|pairwise-bars");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (explain->parsed()) return cmd_explain(f, out);
  if (all->parsed()) return cmd_explain_all(f, out);
  if (aggregate->parsed()) return cmd_aggregate(f, out);
  if (metrics->parsed()) return cmd_metrics(f, out);
  if (synth->parsed()) return cmd_synth(f, out);
  if (bench->parsed()) return cmd_bench(f, out);
  return cmd_render(f, out);
}

}  // namespace

Index parse_k(std::string_view text, Index n) {
  if (!text.empty() && text.back() == '%') {
    text.remove_suffix(1);
    double pct = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, pct);
    if (text.empty() || ec != std::errc() || ptr != end || !(pct > 0.0) ||
        pct > 100.0) {
      throw ValidationError("--k: percentage must lie in (0, 100]");
    }
    return std::max<Index>(
        1, static_cast<Index>(std::ceil(pct * static_cast<double>(n) / 100.0)));
  }
  const Index k = parse_index(text, "--k");
  if (k < 1) throw ValidationError("--k must be a positive integer");
  return k;
}

std::optional<Index> parse_samples(std::string_view text) {
  if (text == "exact" || text == "EXACT") return std::nullopt;
  const Index m = parse_index(text, "--samples");
  if (m < 1) throw ValidationError("--samples must be positive or 'exact'");
  return m;
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t seed = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, seed);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError("--seed: '" + std::string(text) +
                          "' is not an unsigned 64-bit integer");
  }
  return seed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ComputationError& e) {
    err << "computation error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace rankshap
