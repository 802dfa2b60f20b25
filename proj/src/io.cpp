#include "latt/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace latt {

namespace {

// Whitespace tokens; '#' at the start of a token begins a comment.
class Tokens {
 public:
  Tokens(std::string_view text, std::string what) : what_(std::move(what)) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      for (std::size_t h = 0; h < line.size(); ++h)
        if (line[h] == '#' && (h == 0 || std::isspace(static_cast<unsigned char>(line[h - 1])))) {
          line.resize(h);
          break;
        }
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks_.push_back(t);
    }
  }
  bool done() const { return pos_ == toks_.size(); }
  const std::string& peek() const {
    if (done()) fail("unexpected end of input");
    return toks_[pos_];
  }
  std::string next() {
    const std::string& t = peek();
    ++pos_;
    return t;
  }
  void expect(std::string_view word) {
    std::string t = next();
    if (t != word) fail("expected '" + std::string(word) + "', found '" + t + "'");
  }
  Integer integer() {
    std::string t = next();
    Integer z;
    if (t.empty() || z.set_str(t, 10) != 0) fail("bad integer '" + t + "'");
    return z;
  }
  std::size_t count() {
    Integer z = integer();
    if (z < 0 || !z.fits_ulong_p()) fail("bad count");
    return z.get_ui();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw InputError(what_ + ": " + msg); }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
  std::string what_;
};

bool is_identity(const RatMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Integer lcm_den(const Integer& a, const RatMatrix& m) {
  Integer r = a;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(r.get_mpz_t(), r.get_mpz_t(), m(i, j).get_den_mpz_t());
  return r;
}

void emit_rows(std::ostringstream& out, const RatMatrix& m, const Integer& den) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rational x = m(i, j) * den;
      out << (j ? " " : "") << x.get_num().get_str();
    }
    out << '\n';
  }
}

RatMatrix read_rows(Tokens& t, std::size_t rows, std::size_t cols, const Integer& den) {
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = make_rational(t.integer(), den);
  return m;
}

std::string word_or_empty(const std::string& s) {
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) throw InputError("label must be a single word: " + s);
  if (!s.empty() && s[0] == '#') throw InputError("label must not start with '#': " + s);
  return s;
}

}  // namespace

std::string emit_lattice(const Lattice& l) {
  const bool ident = is_identity(l.ambient_form());
  Integer den = lcm_den(1, l.basis());
  if (!ident) den = lcm_den(den, l.ambient_form());
  std::ostringstream out;
  out << "latt-lattice 1\n";
  if (!l.label().empty()) out << "label " << word_or_empty(l.label()) << '\n';
  out << "dim " << l.rank() << "\nambient " << l.ambient_dim() << "\ndenominator " << den.get_str() << "\nbasis\n";
  emit_rows(out, l.basis(), den);
  if (ident) {
    out << "ambient_form identity\n";
  } else {
    out << "ambient_form\n";
    emit_rows(out, l.ambient_form(), den);
  }
  return out.str();
}

Lattice parse_lattice(std::string_view text) {
  Tokens t(text, "lattice file");
  t.expect("latt-lattice");
  if (t.next() != "1") t.fail("unsupported format version");
  std::string label;
  if (t.peek() == "label") {
    t.next();
    label = t.next();
  }
  t.expect("dim");
  std::size_t n = t.count();
  t.expect("ambient");
  std::size_t m = t.count();
  t.expect("denominator");
  Integer den = t.integer();
  if (den <= 0) t.fail("denominator must be positive");
  if (n == 0 || m == 0) t.fail("empty lattice");
  t.expect("basis");
  RatMatrix basis = read_rows(t, n, m, den);
  t.expect("ambient_form");
  RatMatrix form(m, m);
  if (!t.done() && t.peek() == "identity") {
    t.next();
    for (std::size_t i = 0; i < m; ++i) form(i, i) = 1;
  } else {
    form = read_rows(t, m, m, den);
  }
  if (!t.done()) t.fail("trailing data after ambient form");
  return Lattice(std::move(basis), std::move(form), std::move(label));
}

std::string emit_matrix(const IntMatrix& m) {
  std::ostringstream out;
  out << "latt-matrix 1\nrows " << m.rows() << "\ncols " << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j).get_str();
    out << '\n';
  }
  return out.str();
}

std::vector<IntMatrix> parse_matrices(std::string_view text) {
  Tokens t(text, "matrix file");
  std::vector<IntMatrix> out;
  while (!t.done()) {
    t.expect("latt-matrix");
    if (t.next() != "1") t.fail("unsupported format version");
    t.expect("rows");
    std::size_t r = t.count();
    t.expect("cols");
    std::size_t c = t.count();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = t.integer();
    out.push_back(std::move(m));
  }
  if (out.empty()) t.fail("no matrices");
  return out;
}

std::string emit_hermitian(const CyclotomicMatrix& h) {
  std::ostringstream out;
  out << "latt-hermitian 1\np " << h.p() << "\nsize " << h.size() << '\n';
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) {
      const Cyclotomic& a = h(i, j);
      for (std::size_t k = 0; k < a.size(); ++k) out << (k ? " " : "") << a[k].get_str();
      out << '\n';
    }
  return out.str();
}

CyclotomicMatrix parse_hermitian(std::string_view text) {
  Tokens t(text, "hermitian file");
  t.expect("latt-hermitian");
  if (t.next() != "1") t.fail("unsupported format version");
  t.expect("p");
  Integer p = t.integer();
  if (p < 2 || !p.fits_slong_p() || !is_prime(p.get_si())) t.fail("p must be prime");
  t.expect("size");
  std::size_t z = t.count();
  if (z == 0) t.fail("empty matrix");
  std::vector<std::vector<Cyclotomic>> e(z, std::vector<Cyclotomic>(z));
  for (auto& row : e)
    for (auto& a : row) {
      a.resize(static_cast<std::size_t>(p.get_si() - 1));
      for (auto& c : a) c = t.integer();
    }
  if (!t.done()) t.fail("trailing data");
  return CyclotomicMatrix(p.get_si(), std::move(e));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

Lattice load_lattice(const std::filesystem::path& path) { return parse_lattice(read_file(path)); }

SearchConfigFile parse_search_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("search config: ") + e.what());
  }
  auto fail = [](const std::string& m) -> void { throw InputError("search config: " + m); };
  if (!j.is_object()) fail("top level must be an object");
  if (j.value("format", std::string()) != "latt-search 1") fail("format must be \"latt-search 1\"");
  auto rational_of = [&](const json& v) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (!v.is_string()) fail("rationals are given as integers or strings");
    return parse_rational(v.get<std::string>());
  };
  auto path_of = [&](const char* key) { return base_dir / j.at(key).get<std::string>(); };

  try {
    SearchConfigFile f{.config = SearchConfig{.left = std::nullopt, .right = load_lattice(path_of("right"))}};
    SearchConfig& c = f.config;
    if (j.contains("left") && !j["left"].is_null()) c.left = load_lattice(path_of("left"));
    c.p = j.at("p").get<std::int64_t>();
    c.glue_rank = j.at("glue_rank").get<std::size_t>();
    c.target_min = rational_of(j.at("target_min"));
    if (j.contains("left_frame")) {
      for (const auto& row : j["left_frame"]) {
        AmbientVector v;
        for (const auto& x : row) v.push_back(rational_of(x));
        c.left_frame.push_back(std::move(v));
      }
    } else if (!c.left) {
      c.left_frame.assign(c.glue_rank, AmbientVector{});
    }
    if (j.contains("frame_gram")) {
      const auto& g = j["frame_gram"];
      RatMatrix m(g.size(), g.size());
      for (std::size_t a = 0; a < g.size(); ++a) {
        if (g[a].size() != g.size()) fail("frame_gram must be square");
        for (std::size_t b = 0; b < g.size(); ++b) m(a, b) = rational_of(g[a][b]);
      }
      c.declared_frame_gram = std::move(m);
    }
    std::string sym = j.value("symmetry", std::string("right_aut"));
    if (sym == "right_aut") {
      c.symmetry = SymmetryMode::right_aut;
    } else if (sym == "none") {
      c.symmetry = SymmetryMode::none;
    } else {
      fail("symmetry must be \"right_aut\" or \"none\"");
    }
    c.pin_first_anchor = j.value("pin_first_anchor", true);
    c.smallest_set_first = j.value("smallest_set_first", false);
    c.node_budget = j.value("node_budget", c.node_budget);
    c.checkpoint_interval = j.value("checkpoint_interval", c.checkpoint_interval);
    c.label = j.value("label", std::string());
    if (j.contains("expect_isometric_to")) {
      f.expect_isometric_to = load_lattice(path_of("expect_isometric_to"));
      f.expect_label = f.expect_isometric_to->label().empty() ? j["expect_isometric_to"].get<std::string>()
                                                              : f.expect_isometric_to->label();
    }
    validate(c);
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("search config: ") + e.what());
  }
}

SearchConfigFile load_search_config(const std::filesystem::path& path) {
  return parse_search_config(read_file(path), path.parent_path());
}

}  // namespace latt
