// Copyright 2026 The mtdist Authors
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

#include "mtdist/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mtdist {

namespace {

[[noreturn]] void SyntaxFail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSyntaxError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool ParseNumber(std::string_view token, T& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

LabeledMergeTree parse_mtree(std::string_view text, Label fresh_label_base) {
  struct VertexLine {
    double scalar;
    std::vector<Label> labels;
    std::size_t line;
  };
  std::map<std::uint64_t, VertexLine> vertices;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::size_t>> parent_of;
  std::vector<std::uint64_t> order;
  bool header = false;
  Label fresh = fresh_label_base;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tok = Tokens(line);
    if (tok.empty()) continue;

    if (!header) {
      if (tok.size() != 2 || tok[0] != "mtree" || tok[1] != "1") {
        SyntaxFail(line_no, "expected header 'mtree 1'");
      }
      header = true;
      continue;
    }
    if (tok[0] == "v") {
      if (tok.size() < 3) SyntaxFail(line_no, "vertex line needs an id and a scalar");
      std::uint64_t id;
      double scalar;
      if (!ParseNumber(tok[1], id)) SyntaxFail(line_no, "bad vertex id");
      if (!ParseNumber(tok[2], scalar)) SyntaxFail(line_no, "bad scalar");
      VertexLine vl{scalar, {}, line_no};
      std::set<Label> seen;
      for (std::size_t k = 3; k < tok.size(); ++k) {
        Label label;
        if (!ParseNumber(tok[k], label)) SyntaxFail(line_no, "bad label");
        if (label == -1) {
          label = ++fresh;
        } else if (label <= 0) {
          SyntaxFail(line_no, "labels must be positive (or -1 for unknown)");
        } else if (!seen.insert(label).second) {
          throw Error(ErrorCode::kDuplicateLabel, "line " + std::to_string(line_no) +
                                                      ": label " + std::to_string(label) +
                                                      " repeated");
        }
        vl.labels.push_back(label);
      }
      if (!vertices.emplace(id, std::move(vl)).second) {
        SyntaxFail(line_no, "vertex " + std::to_string(id) + " defined twice");
      }
      order.push_back(id);
    } else if (tok[0] == "e") {
      if (tok.size() != 3) SyntaxFail(line_no, "edge line needs child and parent ids");
      std::uint64_t child, parent;
      if (!ParseNumber(tok[1], child) || !ParseNumber(tok[2], parent)) {
        SyntaxFail(line_no, "bad edge ids");
      }
      if (!parent_of.emplace(child, std::make_pair(parent, line_no)).second) {
        SyntaxFail(line_no, "vertex " + std::to_string(child) + " has two parents");
      }
    } else {
      SyntaxFail(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!header) SyntaxFail(line_no, "missing header 'mtree 1'");

  std::map<std::uint64_t, std::uint32_t> dense;
  for (auto id : order) dense.emplace(id, static_cast<std::uint32_t>(dense.size()));
  RawTree raw;
  raw.vertices.resize(order.size());
  std::vector<std::pair<std::uint32_t, Label>> labels;
  for (auto id : order) {
    const auto& vl = vertices.at(id);
    raw.vertices[dense[id]].scalar = vl.scalar;
    for (auto l : vl.labels) labels.emplace_back(dense[id], l);
  }
  for (const auto& [child, entry] : parent_of) {
    const auto& [parent, line] = entry;
    auto c = dense.find(child);
    auto p = dense.find(parent);
    if (c == dense.end() || p == dense.end()) {
      throw Error(ErrorCode::kDisconnectedVertex,
                  "line " + std::to_string(line) + ": edge references undefined vertex " +
                      std::to_string(c == dense.end() ? child : parent));
    }
    raw.vertices[c->second].parent = p->second;
  }
  return LabeledMergeTree::Build(raw, labels);
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string FormatDouble17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string write_mtree(const LabeledMergeTree& lt) {
  const auto& t = lt.tree();
  std::string out = "mtree 1\n";
  // Vertex ids are already canonical breadth-first order.
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    out += "v " + std::to_string(v) + ' ' + FormatDouble17(t.scalar(VertexId{v}));
    for (auto l : lt.labels().labels_of(VertexId{v})) out += ' ' + std::to_string(l);
    out += '\n';
  }
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    if (auto p = t.parent(VertexId{v})) {
      out += "e " + std::to_string(v) + ' ' + std::to_string(p->index) + '\n';
    }
  }
  return out;
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::kIoFailure, "write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

LabeledMergeTree load_mtree(const std::string& path, Label fresh_label_base) {
  const auto text = read_file(path);
  try {
    return parse_mtree(text, fresh_label_base);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void save_mtree(const LabeledMergeTree& lt, const std::string& path) {
  write_file(path, write_mtree(lt));
}

std::string matrix_csv(const DistanceMatrix& m) {
  std::string out = "id";
  for (const auto& id : m.ids) out += ',' + id;
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.ids[i];
    for (std::size_t j = 0; j < m.size(); ++j) out += ',' + FormatDouble(m(i, j));
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const DistanceMatrix& m, const std::string& path) {
  write_file(path, matrix_csv(m));
}

Image heatmap(const DistanceMatrix& m) {
  const auto n = m.size();
  Image img{n, n, std::vector<Rgb>(n * n)};
  double lo = INFINITY, hi = -INFINITY;
  for (double v : m.values) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (std::size_t k = 0; k < n * n; ++k) {
    const double v = m.values[k];
    if (std::isnan(v)) {
      img.pixels[k] = kFailedCell;
      continue;
    }
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    const auto g = static_cast<unsigned char>(255 - std::lround(255.0 * t));
    img.pixels[k] = {g, g, g};
  }
  return img;
}

Image comparison_heatmap(const DistanceMatrix& heuristic,
                         const DistanceMatrix& baseline, double tolerance) {
  if (heuristic.size() != baseline.size()) {
    throw Error(ErrorCode::kInvalidArgument, "comparison matrices differ in size");
  }
  const auto n = heuristic.size();
  Image img{n, n, std::vector<Rgb>(n * n)};
  for (std::size_t k = 0; k < n * n; ++k) {
    const double h = heuristic.values[k];
    const double b = baseline.values[k];
    if (std::isnan(h) || std::isnan(b)) {
      img.pixels[k] = kFailedCell;
    } else if (h < b - tolerance) {
      img.pixels[k] = kHeuristicBetter;
    } else if (h > b + tolerance) {
      img.pixels[k] = kBaselineBetter;
    } else {
      img.pixels[k] = kEqual;
    }
  }
  return img;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + ' ' +
                    std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + 3 * image.pixels.size());
  for (const auto& p : image.pixels) {
    out += static_cast<char>(p.r);
    out += static_cast<char>(p.g);
    out += static_cast<char>(p.b);
  }
  return out;
}

void write_heatmap(const DistanceMatrix& m, const std::string& path) {
  write_file(path, encode_ppm(heatmap(m)));
}

void write_comparison_heatmap(const DistanceMatrix& heuristic,
                              const DistanceMatrix& baseline, const std::string& path) {
  write_file(path, encode_ppm(comparison_heatmap(heuristic, baseline)));
}

}  // namespace mtdist
