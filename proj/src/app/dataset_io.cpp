// SPDX-License-Identifier: Apache-2.0

#include "ckgru/app/dataset_io.hpp"

#include <optional>
#include <set>

#include "ckgru/core/text_io.hpp"
#include "ckgru/features/metadata.hpp"

namespace ckgru {

namespace {

std::vector<int> parse_ids(std::string_view cell, const std::string &where) {
  std::vector<int> ids;
  if (trim(cell).empty())
    return ids;
  for (const auto &part : split(cell, ',')) {
    const long long v = parse_int(trim(part), where);
    if (v < 0 || v > 1000000)
      throw DatasetError(where + ": tag index " + std::to_string(v) +
                         " out of range");
    ids.push_back(static_cast<int>(v));
  }
  return ids;
}

std::string join_ids(const std::vector<int> &ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i)
      s += ',';
    s += std::to_string(ids[i]);
  }
  return s;
}

} // namespace

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
    case '\\': out += "\\\\"; break;
    case '\t': out += "\\t"; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      out += text[i];
      continue;
    }
    switch (text[i + 1]) {
    case '\\': out += '\\'; break;
    case 't': out += '\t'; break;
    case 'n': out += '\n'; break;
    case 'r': out += '\r'; break;
    default:
      // Unknown escapes stay literal.
      out += text[i];
      continue;
    }
    ++i;
  }
  return out;
}

std::vector<RawTweet> parse_dataset(std::string_view contents,
                                    LabelPolicy policy) {
  auto lines = split(contents, '\n');
  for (auto &l : lines)
    if (!l.empty() && l.back() == '\r')
      l.pop_back();
  while (!lines.empty() && lines.back().empty())
    lines.pop_back();
  if (lines.empty())
    throw DatasetError("dataset: missing header row");

  const auto header = split(lines[0], '\t');
  std::optional<std::size_t> id_col, text_col, label_col, pos_col, dep_col;
  std::vector<std::pair<std::size_t, std::size_t>> meta_cols; // column, feature
  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = to_lower_ascii(trim(header[c]));
    if (!seen.insert(name).second)
      throw DatasetError("dataset line 1: duplicate column '" + name + "'");
    if (name == "id")
      id_col = c;
    else if (name == "text")
      text_col = c;
    else if (name == "label")
      label_col = c;
    else if (name == "pos_ids")
      pos_col = c;
    else if (name == "dep_ids")
      dep_col = c;
    else
      for (std::size_t f = 0; f < kMetadataFeatures; ++f)
        if (name == kMetadataColumns[f])
          meta_cols.emplace_back(c, f);
  }
  if (!id_col)
    throw DatasetError("dataset line 1: required column 'id' missing");
  if (!text_col)
    throw DatasetError("dataset line 1: required column 'text' missing");
  if (!label_col && policy == LabelPolicy::required)
    throw DatasetError("dataset line 1: required column 'label' missing");

  std::vector<RawTweet> out;
  std::set<std::string> ids;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string line_ref = "dataset line " + std::to_string(n + 1);
    if (trim(lines[n]).empty())
      continue;
    const auto cells = split(lines[n], '\t');
    if (cells.size() != header.size())
      throw DatasetError(line_ref + ": expected " + std::to_string(header.size()) +
                         " columns, found " + std::to_string(cells.size()));
    const auto where = [&](std::size_t col) {
      return line_ref + ", column '" + std::string(trim(header[col])) + "'";
    };

    RawTweet t;
    t.id = std::string(trim(cells[*id_col]));
    if (t.id.empty())
      throw DatasetError(where(*id_col) + ": empty id");
    if (!ids.insert(t.id).second)
      throw DatasetError(where(*id_col) + ": duplicate id '" + t.id + "'");
    t.text = unescape_field(cells[*text_col]);
    if (trim(t.text).empty())
      throw DatasetError(where(*text_col) + ": empty text");

    if (label_col) {
      const auto cell = trim(cells[*label_col]);
      if (!cell.empty()) {
        t.label = parse_label(cell);
        if (!t.label)
          throw DatasetError(where(*label_col) + ": unknown label '" +
                             std::string(cell) + "'");
      }
    }
    if (!t.label && policy == LabelPolicy::required)
      throw DatasetError((label_col ? where(*label_col) : line_ref) +
                         ": missing label");

    for (const auto &[col, f] : meta_cols) {
      const auto cell = trim(cells[col]);
      if (cell.empty())
        continue;
      try {
        t.metadata.field(f) =
          f == 0 ? parse_post_date(cell) : parse_int(cell, where(col));
      } catch (const std::invalid_argument &e) {
        throw DatasetError(where(col) + ": " + e.what());
      }
      t.metadata_given.set(f);
    }
    try {
      validate_metadata(t.metadata);
      if (pos_col && !trim(cells[*pos_col]).empty())
        t.pos_ids = parse_ids(cells[*pos_col], where(*pos_col));
      if (dep_col && !trim(cells[*dep_col]).empty())
        t.dep_ids = parse_ids(cells[*dep_col], where(*dep_col));
    } catch (const DatasetError &) {
      throw;
    } catch (const std::invalid_argument &e) {
      throw DatasetError(line_ref + ": " + e.what());
    }
    if (t.pos_ids.has_value() != t.dep_ids.has_value())
      throw DatasetError(line_ref + ": pos_ids and dep_ids must be given together");
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<RawTweet> ingest_dataset(const std::string &path,
                                     LabelPolicy policy) {
  std::string contents;
  try {
    contents = read_file(path);
  } catch (const ResourceError &) {
    throw DatasetError("cannot read dataset " + path);
  }
  try {
    return parse_dataset(contents, policy);
  } catch (const DatasetError &e) {
    throw DatasetError(path + ": " + e.what());
  }
}

std::string serialize_dataset(const std::vector<RawTweet> &tweets) {
  std::bitset<kMetadataFeatures> given;
  bool tags = false;
  for (const auto &t : tweets) {
    given |= t.metadata_given;
    tags = tags || t.pos_ids.has_value();
  }
  std::string out = "id\ttext\tlabel";
  for (std::size_t f = 0; f < kMetadataFeatures; ++f)
    if (given.test(f))
      out += "\t" + std::string(kMetadataColumns[f]);
  if (tags)
    out += "\tpos_ids\tdep_ids";
  out += '\n';
  for (const auto &t : tweets) {
    out += t.id;
    out += '\t' + escape_field(t.text);
    out += '\t';
    if (t.label)
      out += label_name(*t.label);
    for (std::size_t f = 0; f < kMetadataFeatures; ++f)
      if (given.test(f)) {
        out += '\t';
        if (t.metadata_given.test(f))
          out += std::to_string(t.metadata.field(f));
      }
    if (tags) {
      out += '\t' + (t.pos_ids ? join_ids(*t.pos_ids) : std::string());
      out += '\t' + (t.dep_ids ? join_ids(*t.dep_ids) : std::string());
    }
    out += '\n';
  }
  return out;
}

} // namespace ckgru
