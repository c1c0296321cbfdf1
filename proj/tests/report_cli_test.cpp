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

#include <cmath>
#include <map>
#include <regex>
#include <sstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rankshap/aggregate.hpp"
#include "rankshap/cli.hpp"
#include "rankshap/engine.hpp"
#include "rankshap/metrics.hpp"
#include "rankshap/report.hpp"
#include "test_util.hpp"

namespace rankshap {
namespace {

using ::testing::HasSubstr;
using Json = nlohmann::json;

struct SvgBar {
  std::string feature;
  double value, start, end, width;
  std::string fill;
};

struct Svg {
  double scale = 0.0;
  double baseline = 0.0;
  double final_value = 0.0;
  std::vector<SvgBar> bars;
};

Svg parse_svg(const std::string& text) {
  Svg s;
  std::smatch m;
  const std::regex scale("data-scale=\"([^\"]+)\"");
  const std::regex base("class=\"baseline\" data-value=\"([^\"]+)\"");
  const std::regex fin("class=\"final\" data-value=\"([^\"]+)\"");
  EXPECT_TRUE(std::regex_search(text, m, scale));
  s.scale = std::stod(m[1]);
  EXPECT_TRUE(std::regex_search(text, m, base));
  s.baseline = std::stod(m[1]);
  EXPECT_TRUE(std::regex_search(text, m, fin));
  s.final_value = std::stod(m[1]);
  const std::regex group(
      "<g class=\"contribution\" data-feature=\"([^\"]*)\" data-value=\"([^\"]+)\" "
      "data-start=\"([^\"]+)\" data-end=\"([^\"]+)\">[\\s\\S]*?"
      "<rect [^>]*width=\"([^\"]+)\"[^>]*fill=\"([^\"]+)\"");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), group);
       it != std::sregex_iterator(); ++it) {
    const auto& g = *it;
    s.bars.push_back({g[1], std::stod(g[2]), std::stod(g[3]), std::stod(g[4]),
                      std::stod(g[5]), g[6]});
  }
  return s;
}

TEST(DisplaySign, FactorsAndHelpfulness) {
  EXPECT_EQ(display_factor(QoIKind::rank(), DisplaySign::kPresentation), -1.0);
  EXPECT_EQ(display_factor(QoIKind::pairwise_rank(), DisplaySign::kPresentation),
            -1.0);
  EXPECT_EQ(display_factor(QoIKind::topk(3), DisplaySign::kPresentation), 1.0);
  EXPECT_EQ(display_factor(QoIKind::rank(), DisplaySign::kEfficiency), 1.0);
  EXPECT_TRUE(is_helpful(QoIKind::rank(), -0.5));
  EXPECT_FALSE(is_helpful(QoIKind::rank(), 0.5));
  EXPECT_TRUE(is_helpful(QoIKind::score(), 0.5));
  EXPECT_TRUE(is_helpful(QoIKind::topk(2), 0.5));
  EXPECT_EQ(parse_display_sign("presentation"), DisplaySign::kPresentation);
  EXPECT_THROW(parse_display_sign("mirrored"), ValidationError);

  ExplanationVector e;
  e.qoi = QoIKind::rank();
  e.contributions = Eigen::Vector2d(1.0, -2.0);
  e.baseline = 3.0;
  e.finalize();
  const auto shown = apply_display_sign({e}, DisplaySign::kPresentation);
  EXPECT_EQ(shown[0].contributions, Eigen::Vector2d(-1.0, 2.0));
}

class WaterfallTest : public ::testing::Test {
 protected:
  Dataset data_ = testing::admissions();
  ScoringFunction f_ = testing::admissions_scorer();
};

TEST_F(WaterfallTest, GeometryFollowsContributions) {
  for (const auto q : {QoIKind::score(), QoIKind::rank(), QoIKind::topk(4)}) {
    for (Index v = 0; v < data_.size(); ++v) {
      const auto e = explain_item(data_, v, q, f_, EngineOptions{});
      const Svg svg = parse_svg(waterfall_svg(e, data_.feature_names(), "t"));
      ASSERT_EQ(svg.bars.size(), 3u);
      EXPECT_EQ(svg.baseline, e.baseline);
      EXPECT_NEAR(svg.final_value, e.reconstruction, 1e-12);
      const auto order = importance_order(e.contributions);
      double at = e.baseline;
      for (std::size_t t = 0; t < 3; ++t) {
        const auto& b = svg.bars[t];
        const double phi = e.contributions(order[t]);
        EXPECT_EQ(b.feature, data_.feature_names()[static_cast<std::size_t>(order[t])]);
        EXPECT_EQ(b.value, phi);
        EXPECT_NEAR(b.start, at, 1e-12);
        at += phi;
        EXPECT_NEAR(b.end, at, 1e-12);
        EXPECT_NEAR(b.width, std::abs(phi) * svg.scale, 1e-3);
        EXPECT_EQ(b.fill, is_helpful(q, phi) ? "#d62728" : "#1f77b4");
      }
      EXPECT_NEAR(svg.bars.back().end, svg.final_value, 1e-12);
    }
  }
}

TEST_F(WaterfallTest, PresentationFlipsLabelsOnly) {
  const auto e = explain_item(data_, 6, QoIKind::rank(), f_, EngineOptions{});
  const auto eff = waterfall_svg(e, data_.feature_names(), "Leo");
  const auto pres = waterfall_svg(e, data_.feature_names(), "Leo",
                                  DisplaySign::kPresentation);
  EXPECT_THAT(eff, HasSubstr(">+0.7143<"));
  EXPECT_THAT(pres, HasSubstr(">-0.7143<"));
  const Svg a = parse_svg(eff);
  const Svg b = parse_svg(pres);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(a.bars[t].width, b.bars[t].width);
    EXPECT_EQ(a.bars[t].fill, b.bars[t].fill);
  }
}

TEST_F(WaterfallTest, AllZeroContributions) {
  ExplanationVector e;
  e.qoi = QoIKind::score();
  e.contributions = Eigen::Vector3d::Zero();
  e.baseline = 2.0;
  e.finalize();
  const Svg svg = parse_svg(waterfall_svg(e, data_.feature_names(), "flat"));
  ASSERT_EQ(svg.bars.size(), 3u);
  for (const auto& b : svg.bars) EXPECT_EQ(b.width, 0.0);
  EXPECT_EQ(svg.final_value, 2.0);
}

TEST_F(WaterfallTest, EscapesMarkup) {
  FeatureMatrix values(2, 1);
  values << 1, 2;
  const Dataset data(values, {"a<b&c"});
  const auto e = explain_item(data, 0, QoIKind::score(),
                              ScoringFunction::linear(Eigen::VectorXd::Ones(1)),
                              EngineOptions{});
  const auto svg = waterfall_svg(e, data.feature_names(), "\"A&M\"");
  EXPECT_THAT(svg, HasSubstr("a&lt;b&amp;c"));
  EXPECT_THAT(svg, HasSubstr("&quot;A&amp;M&quot;"));
}

TEST(PlotData, StrataAndPairwiseAndTriples) {
  const Dataset data = testing::admissions();
  const auto f = testing::admissions_scorer();
  const Ranking r = rank_all(f, data);
  const auto expls = explain_all(data, QoIKind::rank(), f, EngineOptions{});
  const auto sums = stratify_aggregate(expls, r, 3);
  const auto shown = stratify_aggregate(
      apply_display_sign(expls, DisplaySign::kPresentation), r, 3);
  const auto plot = Json::parse(strata_plot_json(shown, data.feature_names(), 8, 3,
                                                 QoIKind::rank(),
                                                 DisplaySign::kPresentation));
  EXPECT_EQ(plot["strata"], 3);
  ASSERT_EQ(plot["bands"].size(), 3u);
  EXPECT_EQ(plot["bands"][0]["rank_from"], 1);
  EXPECT_EQ(plot["bands"][0]["rank_to"], 3);
  EXPECT_EQ(plot["bands"][2]["count"], 2);
  ASSERT_EQ(plot["bands"][0]["boxes"].size(), 3u);
  EXPECT_EQ(plot["display_sign"], "presentation");
  // Flipping the sign mirrors the box: medians negate, quartiles swap.
  EXPECT_DOUBLE_EQ(plot["bands"][0]["boxes"][0]["median"].get<double>(),
                   -sums[0].median);
  EXPECT_DOUBLE_EQ(plot["bands"][0]["boxes"][0]["q1"].get<double>(), -sums[0].q3);

  const auto pair = explain_pair(data, 6, 0, QoIKind::pairwise_rank(), f,
                                 EngineOptions{});
  const auto bars = Json::parse(pairwise_bars_json({pair}, data,
                                                   DisplaySign::kEfficiency));
  ASSERT_EQ(bars["pairs"].size(), 1u);
  EXPECT_EQ(bars["pairs"][0]["subject"], "Leo");
  EXPECT_EQ(bars["pairs"][0]["partner"], "Bob");
  EXPECT_EQ(bars["pairs"][0]["total"], -5.0);
  EXPECT_EQ(bars["pairs"][0]["bars"][1]["favours"], "partner");

  const auto sens = sensitivity(data, expls, {NeighborSpec::Kind::kFeatureKnn, 1},
                                SimilarityKind::kKendall, r);
  const auto csv = triples_csv(sens.triples, data);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "reference,neighbor,expl_dist,rank_dist,feat_dist");
  EXPECT_THAT(csv, HasSubstr("\nBob,Cal,"));
}

// In-process CLI runs.
struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string data_ = (testing::data_dir() / "admissions.csv").string();
  std::string scorer_ = (testing::data_dir() / "admissions_scorer.json").string();

  std::vector<std::string> with_data(std::vector<std::string> args) const {
    args.insert(args.end(), {"--data", data_, "--scorer", scorer_});
    return args;
  }
};

TEST(CliParse, KSamplesSeed) {
  EXPECT_EQ(parse_k("10", 189), 10);
  EXPECT_EQ(parse_k("10%", 189), 19);
  EXPECT_EQ(parse_k("1%", 8), 1);
  EXPECT_EQ(parse_k("100%", 8), 8);
  EXPECT_THROW(parse_k("0", 8), ValidationError);
  EXPECT_THROW(parse_k("0%", 8), ValidationError);
  EXPECT_THROW(parse_k("ten", 8), ValidationError);
  EXPECT_EQ(parse_samples("exact"), std::nullopt);
  EXPECT_EQ(parse_samples("20"), 20);
  EXPECT_THROW(parse_samples("-1"), ValidationError);
  EXPECT_EQ(parse_seed("18446744073709551615"), 18446744073709551615ull);
  EXPECT_THROW(parse_seed("-3"), ValidationError);
}

TEST_F(CliTest, ExplainScoreBob) {
  const auto r = cli(with_data({"explain", "--qoi", "score", "--item", "Bob"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["records"].size(), 1u);
  double sum = 0.0;
  for (const auto& x : doc["records"][0]["contributions"]) sum += x.get<double>();
  EXPECT_NEAR(sum, 0.5714285714285714, 1e-9);
  EXPECT_EQ(doc["records"][0]["id"], "Bob");
}

TEST_F(CliTest, ExplainPairAndWaterfall) {
  const auto out = testing::temp_path("leo-bob.json");
  const auto r = cli(with_data({"explain", "--qoi", "pairwise-rank", "--item",
                                "Leo", "--pair", "Bob", "--out", out.string(),
                                "--render", "waterfall"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = read_explanations(out);
  EXPECT_EQ(doc.records[0].partner, 0);
  auto svg_path = out;
  svg_path.replace_extension(".svg");
  const Svg svg = parse_svg(read_text_file(svg_path));
  EXPECT_EQ(svg.bars.size(), 3u);
  EXPECT_NEAR(svg.final_value, doc.records[0].reconstruction, 1e-12);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli(with_data({"explain", "--qoi", "topk", "--k", "0", "--item", "Bob"})).code,
            1);
  EXPECT_EQ(cli(with_data({"explain", "--item", "Zed"})).code, 1);
  EXPECT_EQ(cli(with_data({"explain", "--item", "Bob", "--bogus"})).code, 1);
  EXPECT_EQ(cli({"explain", "--data", "/nonexistent.csv", "--scorer", scorer_,
                 "--item", "0"}).code,
            2);
  EXPECT_EQ(cli({"explain", "--data", data_, "--scorer", "/nonexistent.json",
                 "--item", "0"}).code,
            2);
  EXPECT_EQ(cli({"explain", "--data", data_, "--scorer", "f1", "--item", "0"}).code,
            1);
  EXPECT_EQ(cli({"explain-all", "--data", data_, "--scorer", scorer_, "--qoi",
                 "pairwise-rank"}).code,
            1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"synth", "--builtin", "D9"}).code, 1);

  const auto bad = testing::temp_path("divide.json");
  write_text_file(bad, R"j({"kind": "expression", "expression": "gpa / (essay - 3)"})j");
  const auto r = cli({"explain-all", "--data", data_, "--scorer", bad.string(),
                      "--qoi", "score"});
  EXPECT_EQ(r.code, 3);
  EXPECT_THAT(r.err, HasSubstr("computation error"));
}

TEST_F(CliTest, ExplainAllIsByteDeterministic) {
  const auto a = cli(with_data({"explain-all", "--samples", "3", "--seed", "5",
                                "--qoi", "topk", "--k", "50%"}));
  const auto b = cli(with_data({"explain-all", "--samples", "3", "--seed", "5",
                                "--qoi", "topk", "--k", "50%", "--jobs", "4"}));
  const auto c = cli(with_data({"explain-all", "--samples", "3", "--seed", "6",
                                "--qoi", "topk", "--k", "50%"}));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(Json::parse(a.out)["qoi"]["k"], 4);
}

TEST_F(CliTest, Synth) {
  const auto a = cli({"synth", "--builtin", "D3", "--seed", "7"});
  const auto b = cli({"synth", "--builtin", "D3", "--seed", "7"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Dataset d3 = parse_dataset_csv(a.out);
  EXPECT_EQ(d3.size(), 2000);
  EXPECT_EQ(d3.feature_names(), (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(a.out.substr(0, 6), "x1,x2\n");

  const Dataset d1 = parse_dataset_csv(cli({"synth", "--builtin", "D1", "--n", "300"}).out);
  EXPECT_TRUE((d1.values().col(1).array() == 0.0 ||
               d1.values().col(1).array() == 1.0).all());

  const auto spec = testing::temp_path("spec.json");
  write_text_file(spec, R"({"n": 10, "features": [{"kind": "bernoulli", "p": 1}]})");
  const auto r = cli({"synth", "--spec", spec.string()});
  EXPECT_EQ(r.out, "x1\n1\n1\n1\n1\n1\n1\n1\n1\n1\n1\n");
  EXPECT_EQ(cli({"synth", "--builtin", "D3", "--spec", spec.string()}).code, 1);
}

TEST_F(CliTest, AggregateInlineAndFromDocument) {
  const auto doc = testing::temp_path("all-rank.json");
  ASSERT_EQ(cli(with_data({"explain-all", "--out", doc.string()})).code, 0);
  const auto inline_run = cli(with_data({"aggregate", "--strata", "4"}));
  const auto from_doc = cli(with_data({"aggregate", "--strata", "4",
                                       "--explanations", doc.string()}));
  ASSERT_EQ(inline_run.code, 0) << inline_run.err;
  EXPECT_EQ(inline_run.out, from_doc.out);
  EXPECT_EQ(std::count(inline_run.out.begin(), inline_run.out.end(), '\n'), 13);

  const auto one = cli(with_data({"aggregate", "--strata", "1"}));
  EXPECT_THAT(one.out, HasSubstr("\n1,gpa,8,"));
  const auto per_item = cli(with_data({"aggregate", "--strata", "8"}));
  const auto rows = parse_csv(per_item.out);
  ASSERT_EQ(rows.size(), 25u);
  for (std::size_t t = 1; t < rows.size(); ++t) {
    EXPECT_EQ(rows[t][2], "1");
    EXPECT_EQ(rows[t][3], rows[t][4]);
    EXPECT_EQ(rows[t][4], rows[t][5]);
  }
  EXPECT_EQ(cli(with_data({"aggregate", "--strata", "9"})).code, 1);

  const auto csv = testing::temp_path("strata.csv");
  ASSERT_EQ(cli(with_data({"aggregate", "--out", csv.string()})).code, 1);
  ASSERT_EQ(cli(with_data({"aggregate", "--strata", "2", "--out", csv.string(),
                           "--display-sign", "presentation"})).code,
            0);
  auto plot = csv;
  plot.replace_extension(".plot.json");
  const auto j = Json::parse(read_text_file(plot));
  EXPECT_EQ(j["display_sign"], "presentation");
  EXPECT_EQ(j["bands"].size(), 2u);
}

TEST_F(CliTest, MetricsReport) {
  const auto exact = testing::temp_path("m-exact.json");
  const auto sampled = testing::temp_path("m-sampled.json");
  ASSERT_EQ(cli(with_data({"explain-all", "--out", exact.string()})).code, 0);
  ASSERT_EQ(cli(with_data({"explain-all", "--samples", "4", "--out",
                           sampled.string()})).code,
            0);
  const auto triples = testing::temp_path("triples.csv");
  const auto r = cli(with_data({"metrics", "--explanations", exact.string(),
                                "--explanations", sampled.string(),
                                "--neighbor-count", "2", "--triples",
                                triples.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["documents"][0]["method_fidelity"].get<double>(), 1.0, 1e-9);
  for (const char* k : {"kendall", "jaccard-top2", "euclid-unit"}) {
    EXPECT_EQ(j["agreement"][k][0][0], 1.0);
    EXPECT_EQ(j["agreement"][k][1][1], 1.0);
    EXPECT_EQ(j["agreement"][k][0][1], j["agreement"][k][1][0]);
  }
  EXPECT_NEAR(j["sensitivity"]["score"].get<double>(), 7.0 / 12.0, 1e-12);
  EXPECT_EQ(parse_csv(read_text_file(triples)).size(), 17u);

  // A document computed on other data is refused.
  const auto other = testing::temp_path("d3.csv");
  ASSERT_EQ(cli({"synth", "--builtin", "D3", "--n", "8", "--out", other.string()}).code,
            0);
  EXPECT_EQ(cli({"metrics", "--data", other.string(), "--scorer", "f1",
                 "--explanations", exact.string()}).code,
            1);
}

TEST_F(CliTest, Bench) {
  const auto r = cli(with_data({"bench", "--sweep-samples", "3,exact",
                                "--sweep-coalition", "all,1", "--items", "4"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], "samples");
  EXPECT_EQ(rows[2][0], "exact");
  EXPECT_EQ(rows[2][1], "all");
  EXPECT_EQ(rows[2][4], "1");
  EXPECT_EQ(rows[2][5], "1");
  for (std::size_t c = 6; c < 9; ++c) EXPECT_EQ(rows[2][c], "1");
  EXPECT_EQ(rows[3][1], "1");
  EXPECT_EQ(cli(with_data({"bench", "--sweep-samples", "8"})).code, 1);
}

TEST_F(CliTest, RenderFromDocument) {
  const auto doc = testing::temp_path("render-src.json");
  ASSERT_EQ(cli(with_data({"explain-all", "--qoi", "score", "--out",
                           doc.string()})).code,
            0);
  const auto r = cli({"render", "--explanations", doc.string(), "--data", data_,
                      "--item", "Osi"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Svg svg = parse_svg(r.out);
  EXPECT_NEAR(svg.final_value, 3.0, 1e-12);
  EXPECT_THAT(r.out, HasSubstr("Osi"));

  const auto pair_doc = testing::temp_path("render-pair.json");
  ASSERT_EQ(cli(with_data({"explain", "--qoi", "pairwise-score", "--item", "Leo",
                           "--pair", "Bob", "--out", pair_doc.string()})).code,
            0);
  EXPECT_EQ(cli({"render", "--explanations", pair_doc.string(), "--render",
                 "pairwise-bars"}).code,
            1);
  const auto bars = cli({"render", "--explanations", pair_doc.string(), "--data",
                         data_, "--render", "pairwise-bars"});
  ASSERT_EQ(bars.code, 0) << bars.err;
  EXPECT_EQ(Json::parse(bars.out)["pairs"].size(), 1u);
}

}  // namespace
}  // namespace rankshap
