#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "decon/error.hpp"
#include "decon/mesh.hpp"

namespace decon {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

// Splits into non-empty, comment-stripped, tokenized lines.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line, "invalid number '" + std::string(token) + "'");
  return value;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Line> lines) : lines_(std::move(lines)) {}

  const Line& next(const char* expecting) {
    if (i_ >= lines_.size()) throw ParseError(0, std::string("unexpected end of input, expected ") + expecting);
    return lines_[i_++];
  }
  bool done() const { return i_ >= lines_.size(); }
  std::size_t line() const { return i_ < lines_.size() ? lines_[i_].number : 0; }

 private:
  std::vector<Line> lines_;
  std::size_t i_ = 0;
};

int parse_header(Cursor& cur, const char* keyword) {
  const Line& l = cur.next(keyword);
  if (l.tokens.size() != 2 || l.tokens[0] != keyword)
    throw ParseError(l.number, std::string("expected '") + keyword + " <count>'");
  const int value = parse_number<int>(l.tokens[1], l.number);
  if (value < 0) throw ParseError(l.number, std::string(keyword) + " must be non-negative");
  return value;
}

}  // namespace

SimplicialMesh load_mesh(std::string_view text) {
  Cursor cur(tokenize(text));

  const int d = parse_header(cur, "DIM");
  if (d < 1 || d > 3) throw ParseError(1, "DIM must be 1, 2 or 3");

  const int n = parse_header(cur, "VERTICES");
  Eigen::MatrixXd V(n, d);
  for (int i = 0; i < n; ++i) {
    const Line& l = cur.next("vertex coordinates");
    if (static_cast<int>(l.tokens.size()) != d)
      throw ParseError(l.number, "expected " + std::to_string(d) + " coordinates");
    for (int c = 0; c < d; ++c) V(i, c) = parse_number<double>(l.tokens[c], l.number);
  }

  const int t = parse_header(cur, "SIMPLICES");
  Eigen::MatrixXi T(t, d + 1);
  for (int s = 0; s < t; ++s) {
    const Line& l = cur.next("simplex indices");
    if (static_cast<int>(l.tokens.size()) != d + 1)
      throw ParseError(l.number, "expected " + std::to_string(d + 1) + " vertex indices");
    for (int c = 0; c <= d; ++c) {
      const int v = parse_number<int>(l.tokens[c], l.number);
      if (v < 0 || v >= n)
        throw ParseError(l.number, "vertex index " + std::to_string(v) + " out of range [0, " +
                                       std::to_string(n) + ")");
      T(s, c) = v;
    }
  }
  if (!cur.done()) throw ParseError(cur.line(), "trailing content after simplices");

  return SimplicialMesh(std::move(V), std::move(T));
}

std::string save_mesh(const SimplicialMesh& mesh) {
  std::string out;
  out += "DIM " + std::to_string(mesh.dim()) + "\n";
  out += "VERTICES " + std::to_string(mesh.vertex_count()) + "\n";
  char buf[32];
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    for (int c = 0; c < mesh.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", mesh.vertices()(i, c));
      if (c) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  out += "SIMPLICES " + std::to_string(mesh.simplex_count()) + "\n";
  for (int t = 0; t < mesh.simplex_count(); ++t) {
    for (int c = 0; c <= mesh.dim(); ++c) {
      if (c) out += ' ';
      out += std::to_string(mesh.simplices()(t, c));
    }
    out += '\n';
  }
  return out;
}

SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_mesh(ss.str());
}

void write_mesh_file(const SimplicialMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file '" + path + "'");
  out << save_mesh(mesh);
}

}  // namespace decon
