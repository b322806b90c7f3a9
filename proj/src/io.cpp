#include "hyplap/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "hyplap/errors.hpp"

namespace hyplap {
namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Splits one CSV record; double quotes group commas, "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line, bool& ok) {
  std::vector<std::string> out(1);
  bool quoted = false;
  ok = true;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back().push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back().push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back().push_back(ch);
    }
  }
  if (quoted) ok = false;
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_blank_or_comment(std::string_view line) {
  const std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

template <typename T>
T parse_number(std::string_view token, const std::string& source, std::size_t line,
               const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

VertexId parse_vertex(std::string_view token, const std::string& source, std::size_t line) {
  const auto v = parse_number<unsigned long long>(token, source, line, "vertex id");
  if (v > std::numeric_limits<VertexId>::max()) throw ParseError(source, line, "vertex id too large");
  return static_cast<VertexId>(v);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

Hypergraph read_hypergraph(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<RawEdge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const auto tokens = split_whitespace(line);
    if (!have_header) {
      if (tokens.size() != 3 || tokens[0] != "H") {
        throw ParseError(source, line_no, "expected header 'H <n> <m>'");
      }
      n = parse_number<std::size_t>(tokens[1], source, line_no, "vertex count");
      m = parse_number<std::size_t>(tokens[2], source, line_no, "edge count");
      have_header = true;
      edges.reserve(m);
      continue;
    }
    if (tokens[0] != "E") throw ParseError(source, line_no, "expected 'E <weight> <v1> <v2> ...'");
    if (tokens.size() < 3) throw ParseError(source, line_no, "hyperedge needs a weight and vertices");
    if (edges.size() == m) throw ParseError(source, line_no, "more hyperedges than declared");
    RawEdge e;
    e.weight = parse_number<double>(tokens[1], source, line_no, "weight");
    for (std::size_t t = 2; t < tokens.size(); ++t) {
      e.vertices.push_back(parse_vertex(tokens[t], source, line_no));
    }
    edges.push_back(std::move(e));
  }
  if (!have_header) throw ParseError(source, line_no, "missing header 'H <n> <m>'");
  if (edges.size() != m) {
    throw ParseError(source, line_no, "declared " + std::to_string(m) + " hyperedges, found " +
                                          std::to_string(edges.size()));
  }
  try {
    return Hypergraph(n, edges);
  } catch (const ValidationError& err) {
    throw ValidationError(source + ": " + err.what());
  }
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << "H " << h.num_vertices() << ' ' << h.num_edges() << '\n';
  out << std::setprecision(17);
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    out << "E " << h.weight(k);
    for (VertexId v : h.edge(k)) out << ' ' << v;
    out << '\n';
  }
}

Hypergraph load_hypergraph(const std::string& path) {
  auto in = open_input(path);
  return read_hypergraph(in, path);
}

void save_hypergraph(const std::string& path, const Hypergraph& h) {
  auto out = open_output(path);
  write_hypergraph(out, h);
}

Labeling read_labels(std::istream& in, std::size_t num_vertices, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<Labeling::Entry> entries;
  std::vector<bool> seen(num_vertices, false);
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const auto tokens = split_whitespace(line);
    if (tokens.size() != 2) throw ParseError(source, line_no, "expected '<vertex> <value>'");
    const VertexId v = parse_vertex(tokens[0], source, line_no);
    if (v >= num_vertices) throw ParseError(source, line_no, "vertex id out of range");
    if (seen[v]) throw ParseError(source, line_no, "duplicate vertex id " + std::to_string(v));
    seen[v] = true;
    entries.push_back({v, parse_number<double>(tokens[1], source, line_no, "label value")});
  }
  if (entries.empty()) throw ParseError(source, line_no, "no labels");
  return Labeling(num_vertices, std::move(entries));
}

void write_labels(std::ostream& out, const Labeling& labels) {
  out << std::setprecision(17);
  for (const auto& e : labels.entries()) out << e.vertex << ' ' << e.value << '\n';
}

Labeling load_labels(const std::string& path, std::size_t num_vertices) {
  auto in = open_input(path);
  return read_labels(in, num_vertices, path);
}

std::vector<std::size_t> read_class_labels(std::istream& in, std::size_t num_vertices,
                                           const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> truth(num_vertices, 0);
  std::vector<bool> seen(num_vertices, false);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const auto tokens = split_whitespace(line);
    if (tokens.size() != 2) throw ParseError(source, line_no, "expected '<vertex> <class>'");
    const VertexId v = parse_vertex(tokens[0], source, line_no);
    if (v >= num_vertices) throw ParseError(source, line_no, "vertex id out of range");
    if (seen[v]) throw ParseError(source, line_no, "duplicate vertex id " + std::to_string(v));
    seen[v] = true;
    truth[v] = parse_number<std::size_t>(tokens[1], source, line_no, "class index");
    ++count;
  }
  if (count != num_vertices) {
    throw ParseError(source, line_no, "class labels cover " + std::to_string(count) + " of " +
                                          std::to_string(num_vertices) + " vertices");
  }
  return truth;
}

std::vector<std::size_t> load_class_labels(const std::string& path, std::size_t num_vertices) {
  auto in = open_input(path);
  return read_class_labels(in, num_vertices, path);
}

PointSet read_points(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<double> coords;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const auto tokens = split_whitespace(line);
    if (dim == 0) dim = tokens.size();
    if (tokens.size() != dim) {
      throw ParseError(source, line_no, "expected " + std::to_string(dim) + " coordinates");
    }
    for (auto t : tokens) coords.push_back(parse_number<double>(t, source, line_no, "coordinate"));
  }
  if (dim == 0) throw ParseError(source, line_no, "no points");
  try {
    return PointSet(dim, std::move(coords));
  } catch (const ValidationError& err) {
    throw ValidationError(source + ": " + err.what());
  }
}

void write_points(std::ostream& out, const PointSet& points) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t d = 0; d < points.dim(); ++d) {
      if (d > 0) out << ' ';
      out << points.point(i)[d];
    }
    out << '\n';
  }
}

PointSet load_points(const std::string& path) {
  auto in = open_input(path);
  return read_points(in, path);
}

CategoricalDataset read_categorical_csv(std::istream& in, const std::string& label_column,
                                        const std::string& missing_token,
                                        const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool ok = true;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    header = split_csv(line, ok);
    if (!ok) throw ParseError(source, line_no, "unterminated quote");
  }
  if (header.empty()) throw ParseError(source, line_no, "missing header row");
  for (auto& name : header) name = std::string(trim(name));

  std::size_t label_index = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column) label_index = c;
  }
  if (label_index == header.size()) {
    throw ValidationError(source + ": unknown label column '" + label_column + "'");
  }

  CategoricalDataset ds;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_index) ds.table.columns.push_back(header[c]);
  }
  std::unordered_map<std::string, std::size_t> class_index;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line, ok);
    if (!ok) throw ParseError(source, line_no, "unterminated quote");
    if (cells.size() != header.size()) {
      throw ParseError(source, line_no, "expected " + std::to_string(header.size()) +
                                            " cells, found " + std::to_string(cells.size()));
    }
    const std::string label(trim(cells[label_index]));
    if (label.empty() || label == missing_token) {
      throw ParseError(source, line_no, "missing class label");
    }
    auto [it, inserted] = class_index.try_emplace(label, ds.class_names.size());
    if (inserted) ds.class_names.push_back(label);
    ds.truth.push_back(it->second);

    std::vector<std::string> row;
    row.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_index) continue;
      std::string cell(trim(cells[c]));
      if (cell == missing_token) cell.clear();
      row.push_back(std::move(cell));
    }
    ds.table.rows.push_back(std::move(row));
  }
  if (ds.table.rows.empty()) throw ParseError(source, line_no, "no data rows");
  return ds;
}

CategoricalDataset load_categorical_csv(const std::string& path, const std::string& label_column,
                                        const std::string& missing_token) {
  auto in = open_input(path);
  return read_categorical_csv(in, label_column, missing_token, path);
}

void write_solution_csv(std::ostream& out, std::span<const double> u) {
  out << "vertex,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < u.size(); ++i) out << i << ',' << u[i] << '\n';
}

VertexFunction read_solution_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  VertexFunction u;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      if (trim(line) != "vertex,value") throw ParseError(source, line_no, "expected header 'vertex,value'");
      continue;
    }
    bool ok = true;
    const auto cells = split_csv(line, ok);
    if (!ok || cells.size() != 2) throw ParseError(source, line_no, "expected 'vertex,value'");
    const VertexId v = parse_vertex(trim(cells[0]), source, line_no);
    if (v != u.size()) throw ParseError(source, line_no, "vertices must be listed 0,1,2,...");
    u.push_back(parse_number<double>(trim(cells[1]), source, line_no, "value"));
  }
  return u;
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
  out << "iter,delta_sup,residual_sup\n" << std::setprecision(17);
  for (const TracePoint& t : trace) out << t.iteration << ',' << t.delta << ',' << t.residual << '\n';
}

}  // namespace hyplap
