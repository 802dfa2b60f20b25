// latt: command-line front end. Every command prints a JSON report (sorted keys)
// unless it emits a lattice file, and re-checks its result before exiting.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "latt/io.hpp"
#include "latt/neighbor.hpp"

using namespace latt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, input_error = 1, incomplete = 2, verification = 3 };

std::string fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream o;
  o << std::hex;
  o.width(16);
  o.fill('0');
  o << h;
  return o.str();
}

struct Input {
  Lattice lattice;
  std::string digest;
};

Input load(const std::string& path) {
  std::string text = read_file(path);
  Lattice l = parse_lattice(text);
  if (l.label().empty()) l = l.with_label(fs::path(path).stem().string());
  return {std::move(l), fnv1a(text)};
}

void verify(bool cond, const std::string& what) {
  if (!cond) throw VerificationFailure("re-check failed: " + what);
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const std::vector<std::int64_t>& v) { return json(v); }

json theta_json(const std::vector<std::pair<Rational, std::uint64_t>>& t) {
  json a = json::array();
  for (const auto& [n, c] : t) a.push_back({to_string(n), c});
  return a;
}

Rational rational_arg(const std::string& s) { return parse_rational(s); }

// Minimum and kissing of l, re-derived on a second basis before they are reported.
std::pair<Rational, std::uint64_t> checked_minimum(const Lattice& l) {
  ShortVectorEngine eng(l);
  Rational m = eng.minimum();
  ShortVectorReport r = eng.enumerate(m);
  Lattice other = l.canonical();
  verify(!has_vector_below(other, m), "no vector below the minimum");
  verify(enumerate_short(other, m).kissing == r.kissing, "kissing number on a second basis");
  return {m, r.kissing};
}

void emit_lattice_output(const Lattice& l, const std::string& out, json& report) {
  if (out.empty()) {
    std::cout << emit_lattice(l);
    return;
  }
  write_file(out, emit_lattice(l));
  report["output"] = out;
  std::cout << report.dump(2) << '\n';
}

json lattice_summary(const Lattice& l) {
  json j;
  j["label"] = l.label();
  j["dim"] = l.rank();
  j["determinant"] = to_string(determinant(l));
  j["integral"] = is_integral(l);
  j["even"] = is_even(l);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact lattice toolkit"};
  app.require_subcommand(1);
  if (const char* b = std::getenv("LATT_BUDGET")) {
    try {
      set_default_node_budget(std::stoull(b));
    } catch (const std::exception&) {
      std::cerr << "error: LATT_BUDGET must be a positive integer\n";
      return input_error;
    }
  }

  std::string file, file2, aux, out, depth_norm, bound, scale, resume, checkpoint, witness;
  std::int64_t p = 0;
  unsigned jobs = 1;
  std::size_t max_classes = 64;

  auto* c_min = app.add_subcommand("min", "minimum, kissing number and basic invariants");
  c_min->add_option("file", file)->required();

  auto* c_sv = app.add_subcommand("shortvecs", "vectors up to a norm bound (one per +- pair)");
  c_sv->add_option("file", file)->required();
  c_sv->add_option("--bound", bound)->required();

  auto* c_dual = app.add_subcommand("dual", "dual lattice");
  c_dual->add_option("file", file)->required();
  c_dual->add_option("--out", out);

  auto* c_lll = app.add_subcommand("lll", "LLL-reduced basis");
  c_lll->add_option("file", file)->required();
  c_lll->add_option("--out", out);

  auto* c_disc = app.add_subcommand("disc", "discriminant group and its forms");
  c_disc->add_option("file", file)->required();

  auto* c_aut = app.add_subcommand("aut", "automorphism group");
  c_aut->add_option("file", file)->required();
  c_aut->add_option("--depth-norm", depth_norm);
  c_aut->add_option("--out", out, "write generators as a matrix file");

  auto* c_iso = app.add_subcommand("iso", "isometry test");
  c_iso->add_option("file1", file)->required();
  c_iso->add_option("file2", file2)->required();

  auto* c_type = app.add_subcommand("type", "type p-(z,d)-s of a prime-order automorphism");
  c_type->add_option("file", file)->required();
  c_type->add_option("--sigma", aux)->required();

  auto* c_trace = app.add_subcommand("trace-lattice", "trace lattice of a Hermitian matrix");
  c_trace->add_option("hfile", file)->required();
  c_trace->add_option("--p", p)->required();
  c_trace->add_option("--scale", scale)->default_val("1");
  c_trace->add_option("--out", out);

  auto* c_glue = app.add_subcommand("glue-search", "glue-vector backtracking search");
  c_glue->add_option("config", file)->required();
  c_glue->add_option("--resume", resume);
  c_glue->add_option("--checkpoint", checkpoint);
  c_glue->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  auto* c_nb = app.add_subcommand("neighbor", "Kneser p-neighbor");
  c_nb->add_option("file", file)->required();
  c_nb->add_option("--p", p)->required();
  c_nb->add_option("--witness", witness, "comma-separated basis coordinates");
  c_nb->add_option("--out", out);

  auto* c_walk = app.add_subcommand("genus-walk", "neighbor closure with isometry deduplication");
  c_walk->add_option("file", file)->required();
  c_walk->add_option("--p", p)->required();
  c_walk->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  c_walk->add_option("--max-classes", max_classes);

  auto* c_gs = app.add_subcommand("group-sublattice", "sum of (s - 1)L over generators s");
  c_gs->add_option("file", file)->required();
  c_gs->add_option("--gens", aux)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : input_error;
  }

  try {
    json r;
    int status = ok;
    r["command"] = app.get_subcommands().front()->get_name();

    if (c_min->parsed()) {
      Input in = load(file);
      const Lattice& l = in.lattice;
      auto [m, k] = checked_minimum(l);
      r["input_digest"] = in.digest;
      r["lattice"] = lattice_summary(l);
      r["minimum"] = to_string(m);
      r["kissing"] = k;
      r["unimodular"] = is_unimodular(l);
      if (is_even(l) && is_unimodular(l)) {
        r["extremal_bound"] = extremal_bound(static_cast<int>(l.rank()));
        r["extremal"] = m == extremal_bound(static_cast<int>(l.rank()));
      }
    } else if (c_sv->parsed()) {
      Input in = load(file);
      ShortVectorReport rep = enumerate_short(in.lattice, rational_arg(bound));
      json vs = json::array();
      for (const auto& v : rep.vectors) vs.push_back({{"coords", vector_json(v.coords)}, {"norm", to_string(v.norm)}});
      for (const auto& v : rep.vectors) verify(in.lattice.norm(in.lattice.vector(v.coords)) == v.norm, "vector norm");
      r["input_digest"] = in.digest;
      r["bound"] = to_string(rep.bound);
      r["count"] = rep.count;
      r["minimum"] = rep.minimum ? json(to_string(*rep.minimum)) : json(nullptr);
      r["kissing"] = rep.kissing;
      r["vectors"] = vs;
    } else if (c_dual->parsed()) {
      Input in = load(file);
      Lattice d = dual_lattice(in.lattice).with_label(in.lattice.label() + "_dual");
      verify(determinant(d) * determinant(in.lattice) == 1, "det(L#) det(L) = 1");
      for (std::size_t i = 0; i < d.rank(); ++i)
        for (std::size_t j = 0; j < in.lattice.rank(); ++j)
          verify(is_integer(d.inner(d.basis().row(i), in.lattice.basis().row(j))), "dual pairing");
      r["input_digest"] = in.digest;
      emit_lattice_output(d, out, r);
      return ok;
    } else if (c_lll->parsed()) {
      Input in = load(file);
      LllResult red = lll_reduce(in.lattice);
      verify(same_lattice(red.lattice, in.lattice), "same lattice");
      verify(is_lll_reduced(red.lattice.gram()), "LLL condition");
      r["input_digest"] = in.digest;
      emit_lattice_output(red.lattice, out, r);
      return ok;
    } else if (c_disc->parsed()) {
      Input in = load(file);
      DiscriminantGroup d(in.lattice);
      verify(Rational(d.order()) == determinant(in.lattice), "|L#/L| = det L");
      r["input_digest"] = in.digest;
      r["order"] = d.order().get_str();
      r["invariants"] = d.orders();
      json b = json::array();
      for (std::size_t i = 0; i < d.rank(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < d.rank(); ++j) row.push_back(to_string(d.bilinear_table()(i, j)));
        b.push_back(row);
      }
      r["bilinear"] = b;
      if (d.quadratic_table()) {
        json q = json::array();
        for (const auto& x : *d.quadratic_table()) q.push_back(to_string(x));
        r["quadratic"] = q;
      }
    } else if (c_aut->parsed()) {
      Input in = load(file);
      std::optional<Rational> dn;
      if (!depth_norm.empty()) dn = rational_arg(depth_norm);
      AutStats st;
      IsometryGroup g = automorphism_group(in.lattice, st, dn);
      std::string gens;
      for (const auto& s : g.generators()) {
        verify(preserves_gram(s.matrix(), in.lattice.gram(), in.lattice.gram()), "generator preserves the gram");
        gens += emit_matrix(s.matrix());
      }
      if (!out.empty()) {
        write_file(out, gens);
        r["output"] = out;
      }
      r["input_digest"] = in.digest;
      r["order"] = g.order().get_str();
      r["generators"] = g.generators().size();
      r["domain_size"] = g.points().size();
      r["depth_norm"] = to_string(g.points().depth());
      r["orbit_lengths"] = st.orbit_lengths;
      r["nodes"] = st.nodes;
    } else if (c_iso->parsed()) {
      Input a = load(file), b = load(file2);
      auto w = is_isometric(a.lattice, b.lattice);
      r["input_digest"] = json::array({a.digest, b.digest});
      r["isometric"] = w.has_value();
      if (w) {
        verify(preserves_gram(w->matrix(), a.lattice.gram(), b.lattice.gram()), "witness maps gram(2) to gram(1)");
        r["witness"] = matrix_json(w->matrix());
      }
    } else if (c_type->parsed()) {
      Input in = load(file);
      auto ms = parse_matrices(read_file(aux));
      if (ms.size() != 1) throw InputError("sigma file must hold exactly one matrix");
      TypeDecomposition dec = decompose(in.lattice, ms.front());
      const AutType& t = dec.type;
      verify(in.lattice.rank() == t.d + t.z * static_cast<std::size_t>(t.p - 1), "n = d + z(p-1)");
      Integer ps = 1;
      for (std::size_t i = 0; i < t.s; ++i) ps *= t.p;
      verify(dec.index == ps, "index = p^s");
      r["input_digest"] = in.digest;
      r["type"] = t.to_string();
      r["summary"] = "type " + t.to_string();
      r["p"] = t.p;
      r["z"] = t.z;
      r["d"] = t.d;
      r["s"] = t.s;
      r["index"] = dec.index.get_str();
      if (is_even(in.lattice) && is_unimodular(in.lattice)) {
        UnimodularTypeChecks u = check_unimodular_type(in.lattice, dec);
        r["unimodular_checks"] = {{"fixed_elementary", u.fixed_elementary},
                                  {"image_elementary", u.image_elementary},
                                  {"dual_applicable", u.dual_applicable},
                                  {"dual_even", u.dual_even},
                                  {"dual_determinant", u.dual_determinant},
                                  {"passed", u.passed()}};
      }
    } else if (c_trace->parsed()) {
      std::string text = read_file(file);
      CyclotomicMatrix h = parse_hermitian(text);
      if (h.p() != p) throw InputError("--p does not match the Hermitian file");
      Lattice l = hermitian_trace_lattice(h, rational_arg(scale)).with_label(fs::path(file).stem().string() + "_trace");
      verify(l.rank() == h.size() * static_cast<std::size_t>(p - 1), "rank z(p-1)");
      r["input_digest"] = fnv1a(text);
      r["lattice"] = lattice_summary(l);
      emit_lattice_output(l, out, r);
      return ok;
    } else if (c_glue->parsed()) {
      std::string text = read_file(file);
      SearchConfigFile cf = load_search_config(file);
      SearchOptions opts;
      opts.jobs = jobs;
      if (!resume.empty()) opts.resume_path = resume;
      if (!checkpoint.empty()) opts.checkpoint_path = checkpoint;
      SearchResult res = run_search(cf.config, opts);
      json found = json::array();
      for (const auto& f : res.lattices) {
        auto [m, k] = checked_minimum(f.lattice);
        verify(m == f.minimum && k == f.kissing, "minimum and kissing of a found lattice");
        verify(m >= cf.config.target_min, "found lattice meets the target minimum");
        json e;
        e["classes"] = f.classes;
        e["minimum"] = to_string(m);
        e["kissing"] = k;
        e["determinant"] = to_string(determinant(f.lattice));
        e["even"] = is_even(f.lattice);
        e["stabilizer_order"] = f.stabilizer_order.get_str();
        e["raw_count"] = f.raw_count;
        if (cf.expect_isometric_to) {
          bool iso = is_isometric(f.lattice, *cf.expect_isometric_to).has_value();
          e["expected"] = "isometric to " + cf.expect_label + " fixture: " + (iso ? "true" : "false");
        }
        found.push_back(e);
      }
      r["config_digest"] = config_digest(cf.config);
      r["input_digest"] = fnv1a(text);
      r["label"] = cf.config.label;
      r["orbits"] = res.lattices.size();
      r["lattices"] = found;
      r["complete"] = res.complete;
      r["infeasible"] = res.infeasible;
      r["statistics"] = {{"nodes", res.stats.nodes},
                         {"raw_solutions", res.stats.raw_solutions},
                         {"work_items", res.stats.work_items},
                         {"anchors", res.stats.anchors},
                         {"min_candidates", res.stats.min_candidates},
                         {"max_candidates", res.stats.max_candidates}};
      if (!res.complete) status = incomplete;
    } else if (c_nb->parsed()) {
      Input in = load(file);
      const Lattice& l = in.lattice;
      AmbientVector v;
      if (!witness.empty()) {
        IntVector c;
        std::stringstream ss(witness);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.push_back(Integer(tok));
        if (c.size() != l.rank()) throw InputError("--witness needs one coordinate per basis vector");
        v = l.vector(c);
      } else {
        // Shortest vectors first; the first admissible one is used.
        ShortVectorEngine eng(l);
        Rational b = eng.minimum();
        for (int round = 0; round < 8 && v.empty(); ++round, b += b) {
          for (const auto& sv : eng.enumerate(b).vectors) {
            AmbientVector x = l.vector(sv.coords);
            try {
              p_neighbor(l, x, p);
            } catch (const InputError&) {
              continue;
            }
            v = x;
            break;
          }
        }
        if (v.empty()) throw InputError("no admissible witness among short vectors");
      }
      NeighborStep s = p_neighbor(l, v, p);
      Lattice nb = s.result.with_label(l.label() + "_n" + std::to_string(p));
      verify(determinant(nb) == determinant(l), "determinant preserved");
      auto [m, k] = checked_minimum(nb);
      json w = json::array();
      RatVector wc = *l.coordinates(s.witness);
      for (const auto& x : wc) w.push_back(to_string(x));
      r["input_digest"] = in.digest;
      r["witness"] = w;
      r["p"] = p;
      r["neighbor"] = lattice_summary(nb);
      r["minimum"] = to_string(m);
      r["kissing"] = k;
      if (!out.empty()) {
        write_file(out, emit_lattice(nb));
        r["output"] = out;
      }
    } else if (c_walk->parsed()) {
      Input in = load(file);
      WalkLimits lim;
      lim.jobs = jobs;
      lim.max_classes = max_classes;
      GenusWalk w = genus_walk(in.lattice, p, lim);
      Rational mass = 0;
      json cls = json::array();
      for (const auto& c : w.classes) {
        verify(determinant(c.lattice) == determinant(in.lattice), "class determinant");
        mass += Rational(1) / Rational(c.aut_order);
        json e;
        e["minimum"] = to_string(c.key.minimum);
        e["kissing"] = c.key.kissing;
        e["components"] = c.key.components;
        e["theta"] = theta_json(c.key.theta);
        e["even"] = is_even(c.lattice);
        e["aut_order"] = c.aut_order.get_str();
        e["discovered_from"] = c.discovered_from;
        cls.push_back(e);
      }
      verify(mass == w.mass, "mass equals the sum of 1/|Aut|");
      r["input_digest"] = in.digest;
      r["p"] = p;
      r["classes"] = cls;
      r["edges"] = w.edges;
      r["mass"] = to_string(w.mass);
      r["complete"] = w.complete;
      if (!w.note.empty()) r["note"] = w.note;
      if (!w.complete) status = incomplete;
    } else if (c_gs->parsed()) {
      Input in = load(file);
      auto gens = parse_matrices(read_file(aux));
      DifferenceSublattice d = group_difference_sublattice(in.lattice, gens);
      verify(is_sublattice(d.sublattice, in.lattice), "M is a sublattice of L");
      r["input_digest"] = in.digest;
      r["rank"] = d.rank;
      r["rank_drop"] = d.rank_drop;
      if (d.index) {
        verify(*d.index == sublattice_index(d.sublattice, in.lattice), "index");
        r["index"] = d.index->get_str();
        auto [m, k] = checked_minimum(d.sublattice);
        r["minimum"] = to_string(m);
        r["kissing"] = k;
      }
    }
    r["status"] = status == ok ? "ok" : "incomplete";
    std::cout << r.dump(2) << '\n';
    return status;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return input_error;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return incomplete;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return verification;
  }
}
