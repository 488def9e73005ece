// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iomanip>
#include <sstream>

#include "plap/shapes.hpp"

namespace plap {

namespace {

// Yields non-empty, comment-stripped lines together with their 1-based number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  int number() const { return number_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("OFF parse error at line " + std::to_string(number_) + ": " +
                    what);
  }

 private:
  std::istream& in_;
  int number_ = 0;
};

SurfaceMesh read_off(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw MeshError("OFF parse error: empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") reader.fail("expected header \"OFF\"");

  // Counts may share the header line.
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv >> nf)) {
    if (!reader.next(line)) reader.fail("missing counts line");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) reader.fail("malformed counts line");
    counts >> ne;
  }
  if (nv <= 0 || nf <= 0) reader.fail("vertex and facet counts must be positive");

  std::vector<Vec3> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in vertex list");
    std::istringstream ls(line);
    Vec3 x;
    if (!(ls >> x.x() >> x.y() >> x.z())) reader.fail("malformed vertex line");
    vertices.push_back(x);
  }

  std::vector<std::array<int, 3>> facets;
  facets.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in facet list");
    std::istringstream ls(line);
    int k = 0;
    std::array<long, 3> idx{};
    if (!(ls >> k)) reader.fail("malformed facet line");
    if (k != 3) reader.fail("only triangular facets are supported");
    if (!(ls >> idx[0] >> idx[1] >> idx[2])) reader.fail("malformed facet line");
    for (long v : idx) {
      if (v < 0 || v >= nv) reader.fail("facet index " + std::to_string(v) + " out of range");
    }
    facets.push_back({static_cast<int>(idx[0]), static_cast<int>(idx[1]),
                      static_cast<int>(idx[2])});
  }
  return SurfaceMesh::build(3, std::move(vertices), std::move(facets));
}

}  // namespace

SurfaceMesh parse_off(const std::string& text) {
  std::istringstream in(text);
  return read_off(in);
}

SurfaceMesh load_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path.string());
  return read_off(in);
}

std::string format_off(const SurfaceMesh& mesh) {
  if (mesh.dim() != 3) throw MeshError("OFF output requires a triangle mesh (n = 3)");
  std::ostringstream os;
  os << std::setprecision(17);
  os << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_facets() << " 0\n";
  for (const auto& x : mesh.vertices()) {
    os << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  }
  for (const auto& f : mesh.facets()) {
    os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  }
  return os.str();
}

void save_off(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write " + path.string());
  out << format_off(mesh);
  if (!out) throw MeshError("write failed for " + path.string());
}

}  // namespace plap
