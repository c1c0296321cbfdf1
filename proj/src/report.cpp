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

#include "rankshap/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "rankshap/io.hpp"

namespace rankshap {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kWidth = 720.0;
constexpr double kLeft = 150.0;
constexpr double kRight = 60.0;
constexpr double kTop = 48.0;
constexpr double kRow = 30.0;
constexpr const char* kHelpful = "#d62728";
constexpr const char* kHarmful = "#1f77b4";

std::string px(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3f", x);
  return buf.data();
}

std::string label_number(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%+.4g", x);
  return buf.data();
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

DisplaySign parse_display_sign(std::string_view name) {
  if (name == "efficiency") return DisplaySign::kEfficiency;
  if (name == "presentation") return DisplaySign::kPresentation;
  throw ValidationError("unknown display sign '" + std::string(name) + "'");
}

std::string to_string(DisplaySign sign) {
  return sign == DisplaySign::kEfficiency ? "efficiency" : "presentation";
}

double display_factor(QoIKind qoi, DisplaySign sign) {
  return sign == DisplaySign::kPresentation && qoi.is_rank_like() ? -1.0 : 1.0;
}

std::vector<ExplanationVector> apply_display_sign(
    std::vector<ExplanationVector> expls, DisplaySign sign) {
  for (auto& e : expls) e.contributions *= display_factor(e.qoi, sign);
  return expls;
}

bool is_helpful(QoIKind qoi, double contribution) {
  return qoi.is_rank_like() ? contribution < 0.0 : contribution > 0.0;
}

std::string waterfall_svg(const ExplanationVector& expl,
                          const std::vector<std::string>& feature_names,
                          std::string_view title, DisplaySign sign) {
  const Index d = expl.contributions.size();
  if (static_cast<Index>(feature_names.size()) != d) {
    throw ValidationError("waterfall: feature names do not match");
  }
  const auto order = importance_order(expl.contributions);
  // Running positions: baseline, then after each bar.
  std::vector<double> pos{expl.baseline};
  for (const Index j : order) pos.push_back(pos.back() + expl.contributions(j));
  double lo = *std::min_element(pos.begin(), pos.end());
  double hi = *std::max_element(pos.begin(), pos.end());
  if (hi - lo <= 0.0) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double plot = kWidth - kLeft - kRight;
  const double scale = plot / (hi - lo);
  auto x = [&](double v) { return kLeft + (v - lo) * scale; };
  const double factor = display_factor(expl.qoi, sign);
  const double height = kTop + kRow * static_cast<double>(d + 2) + 24.0;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) +
       "\" height=\"" + px(height) + "\" data-qoi=\"" + expl.qoi.name() +
       "\" data-display-sign=\"" + to_string(sign) + "\" data-scale=\"" +
       format_double(scale) + "\">\n";
  s += "  <style>text{font-family:sans-serif;font-size:12px}</style>\n";
  s += "  <text x=\"" + px(kLeft) + "\" y=\"24\" font-size=\"14\">" +
       xml_escape(title) + "</text>\n";

  const double axis_bottom = kTop + kRow * static_cast<double>(d + 1);
  s += "  <line class=\"baseline\" data-value=\"" +
       format_double(expl.baseline) + "\" x1=\"" + px(x(expl.baseline)) +
       "\" y1=\"" + px(kTop - 6) + "\" x2=\"" + px(x(expl.baseline)) +
       "\" y2=\"" + px(axis_bottom) +
       "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  s += "  <text x=\"" + px(x(expl.baseline)) + "\" y=\"" + px(kTop - 10) +
       "\" text-anchor=\"middle\">baseline " +
       xml_escape(format_double(expl.baseline)) + "</text>\n";

  for (Index r = 0; r < d; ++r) {
    const Index j = order[static_cast<std::size_t>(r)];
    const double phi = expl.contributions(j);
    const double start = pos[static_cast<std::size_t>(r)];
    const double end = pos[static_cast<std::size_t>(r) + 1];
    const double y = kTop + kRow * static_cast<double>(r);
    const char* color = is_helpful(expl.qoi, phi) ? kHelpful : kHarmful;
    const auto& name = feature_names[static_cast<std::size_t>(j)];
    s += "  <g class=\"contribution\" data-feature=\"" + xml_escape(name) +
         "\" data-value=\"" + format_double(phi) + "\" data-start=\"" +
         format_double(start) + "\" data-end=\"" + format_double(end) +
         "\">\n";
    s += "    <text x=\"" + px(kLeft - 8) + "\" y=\"" + px(y + 18) +
         "\" text-anchor=\"end\">" + xml_escape(name) + "</text>\n";
    s += "    <rect x=\"" + px(x(std::min(start, end))) + "\" y=\"" +
         px(y + 4) + "\" width=\"" + px(std::abs(phi) * scale) +
         "\" height=\"" + px(kRow - 8) + "\" fill=\"" + color + "\"/>\n";
    s += "    <text x=\"" + px(x(std::max(start, end)) + 4) + "\" y=\"" +
         px(y + 18) + "\">" + label_number(factor * phi) + "</text>\n";
    s += "  </g>\n";
  }

  const double final_y = kTop + kRow * static_cast<double>(d);
  s += "  <line class=\"final\" data-value=\"" +
       format_double(expl.reconstruction) + "\" x1=\"" +
       px(x(pos.back())) + "\" y1=\"" + px(kTop - 6) + "\" x2=\"" +
       px(x(pos.back())) + "\" y2=\"" + px(axis_bottom) +
       "\" stroke=\"#000\"/>\n";
  s += "  <text x=\"" + px(x(pos.back())) + "\" y=\"" + px(final_y + 20) +
       "\" text-anchor=\"middle\">" + expl.qoi.name() + " " +
       xml_escape(format_double(expl.reconstruction)) + "</text>\n";
  s += "  <line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" +
       px(axis_bottom) + "\" x2=\"" + px(kWidth - kRight) + "\" y2=\"" +
       px(axis_bottom) + "\" stroke=\"#999\"/>\n";
  s += "  <text x=\"" + px(kLeft) + "\" y=\"" + px(axis_bottom + 16) +
       "\" text-anchor=\"middle\">" + xml_escape(format_double(lo)) +
       "</text>\n";
  s += "  <text x=\"" + px(kWidth - kRight) + "\" y=\"" +
       px(axis_bottom + 16) + "\" text-anchor=\"middle\">" +
       xml_escape(format_double(hi)) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string strata_plot_json(const std::vector<StratumSummary>& summaries,
                             const std::vector<std::string>& feature_names,
                             Index n, Index n_strata, QoIKind qoi,
                             DisplaySign sign) {
  Json j;
  j["qoi"] = qoi.name();
  j["display_sign"] = to_string(sign);
  j["n"] = n;
  j["strata"] = n_strata;
  j["features"] = feature_names;
  Json bands = Json::array();
  for (Index s = 1; s <= n_strata; ++s) {
    const auto [lo, hi] = stratum_bounds(s, n, n_strata);
    Json band = {{"stratum", s}, {"rank_from", lo + 1}, {"rank_to", hi}};
    Json boxes = Json::array();
    for (const auto& sm : summaries) {
      if (sm.stratum != s) continue;
      band["count"] = sm.count;
      boxes.push_back(
          {{"feature",
            feature_names.at(static_cast<std::size_t>(sm.feature))},
           {"q1", sm.q1},
           {"median", sm.median},
           {"q3", sm.q3},
           {"whisker_lo", sm.whisker_lo},
           {"whisker_hi", sm.whisker_hi}});
    }
    band["boxes"] = std::move(boxes);
    bands.push_back(std::move(band));
  }
  j["bands"] = std::move(bands);
  return j.dump(2) + "\n";
}

std::string pairwise_bars_json(const std::vector<ExplanationVector>& expls,
                               const Dataset& data, DisplaySign sign) {
  Json pairs = Json::array();
  for (const auto& e : expls) {
    if (!e.partner) throw ValidationError("pairwise bars need pairwise explanations");
    const double factor = display_factor(e.qoi, sign);
    Json bars = Json::array();
    for (Index j = 0; j < e.contributions.size(); ++j) {
      const double phi = e.contributions(j);
      bars.push_back(
          {{"feature", data.feature_names()[static_cast<std::size_t>(j)]},
           {"value", factor * phi},
           {"favours", is_helpful(e.qoi, phi) ? "partner" : "subject"}});
    }
    pairs.push_back({{"subject", data.label(e.subject)},
                     {"partner", data.label(*e.partner)},
                     {"qoi", e.qoi.name()},
                     {"total", factor * e.total()},
                     {"bars", std::move(bars)}});
  }
  Json j = {{"display_sign", to_string(sign)}, {"pairs", std::move(pairs)}};
  return j.dump(2) + "\n";
}

std::string triples_csv(const std::vector<SensitivityTriple>& triples,
                        const Dataset& data) {
  std::string out = "reference,neighbor,expl_dist,rank_dist,feat_dist\n";
  for (const auto& t : triples) {
    out += csv_escape(data.label(t.reference)) + ',' +
           csv_escape(data.label(t.neighbor)) + ',' +
           format_double(t.explanation_distance) + ',' +
           std::to_string(t.rank_distance) + ',' +
           format_double(t.feature_distance) + '\n';
  }
  return out;
}

}  // namespace rankshap
