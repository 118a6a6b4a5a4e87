// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/attention_export.hpp"

#include <algorithm>
#include <stdexcept>

#include "ckgru/app/dataset_io.hpp"
#include "ckgru/core/text_io.hpp"

namespace ckgru {

namespace {

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&#39;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

std::vector<AttentionRow> attention_rows(const Model &model,
                                         const std::vector<PreparedTweet> &tweets,
                                         const MinMaxStats &stats) {
  const auto &cfg = model.config();
  if (!cfg.use_attention || cfg.layers < 2 || cfg.gcm_iterations == 0)
    throw std::invalid_argument("model has no attention layer to export");
  std::vector<AttentionRow> rows;
  for (const auto &t : tweets) {
    const Sample s = make_sample(t, model.vocabulary(), cfg, stats);
    const auto weights = model.attention(s).back();
    for (std::size_t i = 0; i < weights.size(); ++i)
      rows.push_back({t.id, i, t.seq.tokens[i], weights[i]});
  }
  return rows;
}

std::string attention_tsv(const std::vector<AttentionRow> &rows) {
  std::string out = "id\tposition\ttoken\tweight\n";
  for (const auto &r : rows)
    out += escape_field(r.id) + '\t' + std::to_string(r.position) + '\t' +
           escape_field(r.token) + '\t' + format_double(r.weight) + '\n';
  return out;
}

std::vector<double> attention_opacity(const std::vector<AttentionRow> &rows) {
  std::vector<double> out(rows.size(), 1.0);
  for (std::size_t b = 0; b < rows.size();) {
    std::size_t e = b;
    double lo = rows[b].weight, hi = rows[b].weight;
    while (e < rows.size() && rows[e].id == rows[b].id) {
      lo = std::min(lo, rows[e].weight);
      hi = std::max(hi, rows[e].weight);
      ++e;
    }
    if (hi > lo)
      for (std::size_t i = b; i < e; ++i)
        out[i] = (rows[i].weight - lo) / (hi - lo);
    b = e;
  }
  return out;
}

std::string attention_html(const std::vector<AttentionRow> &rows) {
  const auto opacity = attention_opacity(rows);
  std::string out =
    "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
    "<title>attention</title>\n<style>\n"
    "body { font-family: sans-serif; }\n"
    ".tweet { margin: 0.6em 0; }\n"
    ".tweet .id { color: #777; margin-right: 0.5em; }\n"
    ".tok { padding: 0 2px; }\n"
    "</style>\n</head>\n<body>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 || rows[i].id != rows[i - 1].id) {
      if (i)
        out += "</div>\n";
      out += "<div class=\"tweet\" data-id=\"" + html_escape(rows[i].id) +
             "\"><span class=\"id\">" + html_escape(rows[i].id) + "</span>";
    }
    out += "<span class=\"tok\" data-weight=\"" + format_double(rows[i].weight) +
           "\" style=\"background-color: rgba(220, 40, 40, " +
           format_double(opacity[i]) + ")\">" + html_escape(rows[i].token) +
           "</span> ";
  }
  if (!rows.empty())
    out += "</div>\n";
  out += "</body>\n</html>\n";
  return out;
}

} // namespace ckgru
