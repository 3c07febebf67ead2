// affinekit command-line front end. Every command prints (or writes) one JSON
// document; --out additionally produces a run manifest next to the output.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "affinekit/cookbook.hpp"
#include "affinekit/io.hpp"
#include "affinekit/parallel.hpp"

#ifndef AFFINEKIT_VERSION
#define AFFINEKIT_VERSION "dev"
#endif

using namespace affinekit;
using io::Json;

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
}

// Short reminders of the input formats, printed after input errors.
const std::map<std::string, std::string> kSchemaHints = {
    {"group", R"({"dim": 2, "symbols"?: [...], "generators": {"g1": {"u": [1, 0], "A": [[1,0],[0,1]]}},
 "closed_form"?: {"exponents": ["n"], "u": ["n"], "A": [["1"]]}, "word_bound"?: 8}   (schemas/group.schema.json))"},
    {"atlas", R"({"dim": 1, "charts": ["U", "V"], "edges": [{"name": "e", "from": "U", "to": "V", "u": [0], "A": [[1]]}],
 "two_cells"?: ["e^-1*f"]}  or  {"quotient": <group>}   (schemas/atlas.schema.json))"},
    {"variation", R"({"q": 1, "h2_rank": 1, "chern": [[1]], "omega0": ["2"], "positive_classes"?: [[1]]}
 periods: {"symbols"?: [...], "spherical": ["a"], "all": ["a", "b"], "intermediate"?: [...]}   (schemas/leaf.schema.json, schemas/periods.schema.json))"},
    {"realization", R"(--system oscillator | oscillator2 | free_particle | anharmonic | file {"name", "n", "mu": ["(x^2+p^2)/2"], "box_half_width"?}
 --base "[1.0]"   (schemas/system.schema.json))"},
    {"measure", R"~(dh --model s1|t2|box; fubini --f "z^2" --iota "1"; weyl --f "exp(-r^2)"; pairmass --area A; density --basis "[[2,0],[0,1]]")~"},
    {"cech", R"({"vertices": ["a","b","c"], "simplices": {"1": [["a","b"]], "2": [...]}, "rank"?: 1, "ring"?: "Z|R|T",
 "monodromy"?: {"a,b": [[1]]}}  or {"builtin": "torus|circle|sphere|rp2|simplex"}
 cochain: {"degree": 2, "values": {"a,b,c": "1/2"}, "default"?: 0}   (schemas/nerve.schema.json, schemas/cochain.schema.json))"},
    {"cookbook", "cookbook list | cookbook run <name>... | cookbook run --all | cookbook inputs <dir>"},
};

struct Globals {
  std::size_t threads = 0;
  std::uint64_t seed = 1;
  double samples = 0;
  std::size_t bins = 10;
  std::string out, manifest, csv;
};

struct Run {
  std::vector<std::string> command;  // subcommand path, e.g. {"measure", "dh"}
  std::vector<std::string> inputs;   // files read
  Json output;
  std::string extra_text;            // CSV payload when requested
};

Json parse_inline(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, "cannot parse \"" + text + "\" as JSON");
  }
}

Json load(Run& run, const std::string& path) {
  run.inputs.push_back(path);
  return io::read_file(path);
}

// Cech inputs may come as one bundle {"nerve", "cochain"|"cocycle", "lifts"} or as separate files.
LocalSystem nerve_of(const Json& in) { return io::local_system_from(in.contains("nerve") ? in.at("nerve") : in); }

Json part_of(Run& run, const Json& bundle, const std::string& file, std::initializer_list<const char*> keys) {
  if (!file.empty()) return load(run, file);
  for (const char* k : keys)
    if (bundle.contains(k)) return bundle.at(k);
  throw Error(ErrorKind::InvalidInput, std::string("no \"") + *keys.begin() + "\" in the input; pass it as a file");
}

std::uint64_t sample_count(const Globals& g, std::uint64_t fallback) {
  if (g.samples <= 0) return fallback;
  if (!(g.samples < 1e15) || g.samples != std::floor(g.samples))
    throw Error(ErrorKind::InvalidInput, "--samples must be a positive integer");
  return static_cast<std::uint64_t>(g.samples);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affinekit: integral affine structures, periods, measures and Cech cocycles"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--threads", g.threads, "worker threads (0 = hardware); results do not depend on it");
  app.add_option("--seed", g.seed, "seed for every random draw");
  app.add_option("--samples", g.samples, "Monte Carlo sample count (accepts 1e6)");
  app.add_option("--bins", g.bins, "histogram bins");
  app.add_option("--out", g.out, "write the JSON result here (and a manifest next to it)");
  app.add_option("--manifest", g.manifest, "manifest path (default: <out>.manifest.json)");
  app.set_version_flag("--version", AFFINEKIT_VERSION);

  Run run;
  std::function<void()> action;
  std::string family;

  // --- group --------------------------------------------------------------------
  auto* group = app.add_subcommand("group", "affine group presentations")->require_subcommand(1);
  std::string file, x_text, start, word, word2, element_text, dev_text, system_text = "oscillator", base_text;
  std::optional<std::size_t> bound;
  long radius = 4;
  bool gamma_finite = false, s_compact = false, pi1_finite = false;
  {
    auto* c = group->add_subcommand("analyze", "translational part, linear parts, closed-form agreement");
    c->add_option("file", file, "group JSON")->required()->check(CLI::ExistingFile);
    c->callback([&] {
      action = [&] {
        auto P = io::group_from(load(run, file));
        run.output = io::to_json(analyze(P));
      };
    });
    c = group->add_subcommand("enumerate", "distinct elements up to a word length");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--bound", bound, "word length bound (default: the file's word_bound)");
    c->callback([&] {
      action = [&] {
        auto P = io::group_from(load(run, file));
        const auto e = enumerate_words(P, bound);
        Json els = Json::array();
        for (const auto& x : e.elements)
          els.push_back({{"word", P.word_text(x.word)}, {"element", io::to_json(x.element)}});
        run.output = {{"closed", e.closed}, {"count", e.elements.size()}, {"elements", els}};
      };
    });
    c = group->add_subcommand("isotropy", "elements fixing a point");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--x", x_text, "point, e.g. '[\"1/2\"]'")->required();
    c->add_option("--bound", bound);
    c->callback([&] {
      action = [&] {
        const Json in = load(run, file);
        auto P = io::group_from(in);
        const auto iso = isotropy(P, io::vector_from(parse_inline(x_text), io::basis_from(in)), bound);
        Json out = Json::array();
        for (const auto& e : iso) out.push_back({{"word", e.word}, {"element", io::to_json(e.element)}});
        run.output = {{"x", parse_inline(x_text)}, {"isotropy", out}};
      };
    });
    c = group->add_subcommand("closed-form", "compare the closed form with word evaluation on a box");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--radius", radius, "exponent box radius");
    c->callback([&] {
      action = [&] {
        auto P = io::group_from(load(run, file));
        const auto r = check_closed_form(P, radius);
        run.output = {{"agrees", r.agrees}, {"checked", r.checked}, {"mismatches", r.mismatches}};
      };
    });
    c = group->add_subcommand("classify", "compactness types of a linear local model");
    c->add_flag("--gamma-finite", gamma_finite);
    c->add_flag("--s-compact", s_compact);
    c->add_flag("--pi1-finite", pi1_finite);
    c->callback([&] {
      action = [&] {
        Json types = Json::array();
        for (auto t : classify_linear_model(gamma_finite, s_compact, pi1_finite)) types.push_back(to_string(t));
        run.output = {{"types", types}};
      };
    });
  }

  // --- atlas --------------------------------------------------------------------
  auto* atlas = app.add_subcommand("atlas", "developing maps and holonomy on chart graphs")->require_subcommand(1);
  {
    auto* c = atlas->add_subcommand("develop", "compose transitions along an edge word");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--start", start, "chart where the rightmost edge begins")->required();
    c->add_option("--word", word, "edge word, written left to right, traversed right to left")->required();
    c->add_option("--x0", x_text, "starting point");
    c->callback([&] {
      action = [&] {
        const Json in = load(run, file);
        const AtlasGraph G = io::atlas_from(in);
        std::optional<ExactVector> x0;
        if (!x_text.empty()) x0 = io::vector_from(parse_inline(x_text), io::basis_from(in));
        const auto d = develop_path(G, make_path(G, start, word, x0));
        run.output = {{"composite", io::to_json(d.composite)}, {"end_chart", G.charts()[d.end_chart]}};
        if (d.endpoint) run.output["endpoint"] = io::to_json(*d.endpoint);
      };
    });
    c = atlas->add_subcommand("holonomy", "affine holonomy and dev of a loop");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--start", start)->required();
    c->add_option("--word", word)->required();
    c->callback([&] {
      action = [&] {
        const AtlasGraph G = io::atlas_from(load(run, file));
        const auto h = holonomy(G, make_path(G, start, word));
        run.output = {{"affine", io::to_json(h.affine)}, {"linear", io::to_json(h.linear)}, {"dev", io::to_json(h.dev)}};
      };
    });
    c = atlas->add_subcommand("cocycle", "check dev(tau then gamma) = dev(tau) + h(tau) dev(gamma)");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--start", start)->required();
    c->add_option("--gamma", word)->required();
    c->add_option("--tau", word2)->required();
    c->callback([&] {
      action = [&] {
        const AtlasGraph G = io::atlas_from(load(run, file));
        run.output = {{"holds", cocycle_check(G, make_path(G, start, word), make_path(G, start, word2))}};
      };
    });
  }

  // --- variation ------------------------------------------------------------------
  auto* variation = app.add_subcommand("variation", "linear variation, monodromy groups, curvature")->require_subcommand(1);
  double su2_r = 1;
  std::size_t mesh = 256;
  {
    auto* c = variation->add_subcommand("run", "class after developing by --dev");
    c->add_option("file", file, "leaf model JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--dev", dev_text, "developing vector, e.g. '[\"3/2\"]'")->required();
    c->callback([&] {
      action = [&] {
        const Json in = load(run, file);
        const LeafModel L = io::leaf_from(in);
        const ExactVector cls = variation_along(L, io::vector_from(parse_inline(dev_text), io::basis_from(in)));
        run.output = {{"class", io::to_json(cls)}};
        if (!L.positive_classes.empty()) run.output["in_symplectic_cone"] = in_symplectic_cone(L, cls);
      };
    });
    c = variation->add_subcommand("act", "action of an affine element on the leaf data");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--element", element_text, "'{\"u\": [1], \"A\": [[1]]}'")->required();
    c->callback([&] {
      action = [&] {
        const Json in = load(run, file);
        const LeafModel L = pi1_action(io::leaf_from(in), io::element_from(parse_inline(element_text), io::basis_from(in)));
        Json chern = Json::array();
        for (const auto& v : L.chern) chern.push_back(io::to_json(v));
        run.output = {{"omega0", io::to_json(L.omega0)}, {"chern", chern}};
      };
    });
    c = variation->add_subcommand("decompose", "kernel of the variation map, zero/full flags");
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->callback([&] {
      action = [&] {
        const auto r = variation_decomposition(io::leaf_from(load(run, file)));
        Json k = Json::array();
        for (const auto& v : r.kernel_basis) k.push_back(io::to_json(v));
        run.output = {{"kernel_basis", k}, {"zero_variation", r.zero_variation}, {"full_variation", r.full_variation}};
      };
    });
    c = variation->add_subcommand("monodromy", "N_mon, N_hol (and N_E) from period lists");
    c->add_option("file", file, "periods JSON")->required()->check(CLI::ExistingFile);
    c->callback([&] {
      action = [&] {
        const Json in = load(run, file);
        const BasisPtr B = io::basis_from(in);
        auto list = [&](const char* key) {
          std::vector<ExactScalar> v;
          for (const auto& x : in.at(key)) v.push_back(io::scalar_from(x, B));
          return v;
        };
        if (!in.contains("spherical") || !in.contains("all"))
          throw Error(ErrorKind::InvalidInput, "periods file needs \"spherical\" and \"all\"");
        std::optional<std::vector<ExactScalar>> mid;
        if (in.contains("intermediate")) mid = list("intermediate");
        run.output = io::to_json(monodromy_product_family(list("spherical"), list("all"), mid));
      };
    });
    c = variation->add_subcommand("su2", "KKS area of a coadjoint orbit of radius r");
    c->add_option("--r", su2_r)->required();
    c->add_option("--mesh", mesh);
    c->callback([&] {
      action = [&] { run.output = {{"r", su2_r}, {"mesh", mesh}, {"area", coadjoint_su2_area(su2_r, mesh)}}; };
    });
  }

  // --- realization ----------------------------------------------------------------
  auto* realization = app.add_subcommand("realization", "period lattices of moment maps")->require_subcommand(1);
  {
    auto* c = realization->add_subcommand("periods", "period lattice at a base point");
    c->add_option("--system", system_text, "builtin name or JSON file");
    c->add_option("--base", base_text, "base point, e.g. '[1.0]'")->required();
    c->callback([&] {
      action = [&] {
        const MomentSystem sys = std::filesystem::exists(system_text) ? io::system_from(load(run, system_text))
                                                                       : io::system_from(Json(system_text));
        run.output = io::to_json(period_lattice(sys, io::doubles_from(parse_inline(base_text)), g.seed));
      };
    });
    c = realization->add_subcommand("check", "moment-map condition and involutivity residuals");
    c->add_option("--system", system_text);
    c->callback([&] {
      action = [&] {
        const MomentSystem sys = std::filesystem::exists(system_text) ? io::system_from(load(run, system_text))
                                                                       : io::system_from(Json(system_text));
        const std::size_t n = sample_count(g, 100);
        run.output = {{"system", sys.name},
                      {"moment_condition_residual", moment_condition_check(sys, n, g.seed)},
                      {"involutivity_residual", involutivity_residual(sys, n, g.seed)}};
      };
    });
  }

  // --- measure --------------------------------------------------------------------
  auto* measure = app.add_subcommand("measure", "Duistermaat-Heckman, Fubini, Weyl, pair-groupoid mass")->require_subcommand(1);
  std::string model = "s1", f_text, iota_text = "1", basis_text;
  double density = 1, scale = 1, area = 1;
  std::size_t degree = 1;
  {
    auto* c = measure->add_subcommand("dh", "histogram of the moment-map push-forward");
    c->add_option("--model", model, "s1 (circle on C^2), t2 (torus on C^2) or box (x on the unit square)");
    c->add_option("--degree", degree, "polynomial fit degree (1-D models)");
    c->add_option("--csv", g.csv, "also write the histogram as CSV");
    c->callback([&] {
      action = [&] {
        const std::vector<std::string> c2 = {"x1", "x2", "p1", "p2"};
        MeasureHistogram h;
        const std::uint64_t n = sample_count(g, 1000000);
        if (model == "s1") {
          h = dh_pushforward(LiouvilleSampler::ball(4, 2), {Expression::parse("(x1^2 + p1^2 + x2^2 + p2^2)/2", c2)},
                             {uniform_edges(0, 2, g.bins)}, n, g.seed);
        } else if (model == "t2") {
          h = dh_pushforward(LiouvilleSampler::ball(4, 2),
                             {Expression::parse("(x1^2 + p1^2)/2", c2), Expression::parse("(x2^2 + p2^2)/2", c2)},
                             {uniform_edges(0, 1, g.bins), uniform_edges(0, 1, g.bins)}, n, g.seed);
        } else if (model == "box") {
          h = dh_pushforward(LiouvilleSampler::box({0, 0}, {1, 1}), {Expression::parse("x", {"x", "p"})},
                             {uniform_edges(0, 1, g.bins)}, n, g.seed);
        } else {
          throw Error(ErrorKind::InvalidInput, "unknown model " + model + " (s1, t2, box)");
        }
        run.output = {{"model", model}, {"histogram", io::to_json(h)}};
        if (h.edges.size() == 1) {
          const auto fit = polynomial_fit(h, degree);
          run.output["fit"] = {{"degree", degree}, {"coefficients", fit.coefficients},
                               {"max_relative_residual", fit.max_relative_residual}};
        }
        if (!g.csv.empty()) run.extra_text = io::histogram_csv(h);
      };
    });
    c = measure->add_subcommand("fubini", "integral over S^2 x [0,1] against iota-weighted leaf integrals");
    c->add_option("--f", f_text, "integrand in x, y, z, b")->required();
    c->add_option("--iota", iota_text, "positive function of b");
    c->add_option("--density", density, "affine density on [0,1]");
    c->add_option("--scale", scale, "multiplier of the measure on M");
    c->callback([&] {
      action = [&] {
        const auto r = fubini_check(Expression::parse(f_text, {"x", "y", "z", "b"}), Expression::parse(iota_text, {"b"}),
                                    density, scale, sample_count(g, 100000), g.seed);
        run.output = {{"lhs", r.lhs}, {"lhs_stderr", r.lhs_stderr}, {"rhs", r.rhs}, {"discrepancy", r.discrepancy}};
      };
    });
    c = measure->add_subcommand("weyl", "Weyl integration formula for su(2) with a radial integrand");
    f_text = "exp(-r^2)";
    c->add_option("--f", f_text, "radial integrand in r");
    c->callback([&] {
      action = [&] {
        const auto w = weyl_su2_check(Expression::parse(f_text, {"r"}), sample_count(g, 1000000), g.seed);
        run.output = {{"lhs", w.lhs}, {"lhs_stderr", w.lhs_stderr}, {"rhs", w.rhs}, {"rhs_error", w.rhs_error},
                      {"relative_error", w.relative_error}};
      };
    });
    c = measure->add_subcommand("pairmass", "Liouville mass of S^2 x S^2 with areas A");
    c->add_option("--area", area)->required();
    c->callback([&] {
      action = [&] {
        const auto m = pair_groupoid_mass(area, sample_count(g, 1000000), g.seed);
        run.output = {{"area", area}, {"mass", m.value}, {"stderr", m.stderr_}};
      };
    });
    c = measure->add_subcommand("density", "integral affine density |det| of a lattice basis");
    c->add_option("--basis", basis_text, "rows, e.g. '[[2,0],[0,1]]'")->required();
    c->callback([&] {
      action = [&] {
        std::vector<ExactVector> b;
        for (const auto& row : parse_inline(basis_text)) b.push_back(io::vector_from(row));
        run.output = {{"density", affine_density(b)}};
        bool rational = true;
        for (const auto& v : b) rational = rational && v.is_rational();
        if (rational) run.output["exact"] = io::to_json(affine_density_exact(b));
      };
    });
  }

  // --- cech -----------------------------------------------------------------------
  auto* cech = app.add_subcommand("cech", "cohomology of local systems and Dixmier-Douady cocycles")->require_subcommand(1);
  std::string cochain_file, lifts_file;
  std::optional<std::size_t> cdegree;
  {
    auto* c = cech->add_subcommand("cohomology", "H^p with integer coefficients");
    c->add_option("file", file, "nerve JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--degree", cdegree, "single degree (default: 0..dim)");
    c->callback([&] {
      action = [&] {
        const LocalSystem sys = nerve_of(load(run, file));
        Json groups = Json::array();
        const std::size_t lo = cdegree.value_or(0), hi = cdegree.value_or(sys.nerve().dim());
        for (std::size_t p = lo; p <= hi; ++p) groups.push_back(io::to_json(cohomology(sys, p)));
        run.output = {{"cohomology", groups}};
      };
    });
    auto cochain_cmd = [&](const char* name, const char* help, std::function<void(const LocalSystem&, const Cochain&)> f) {
      auto* s = cech->add_subcommand(name, help);
      s->add_option("file", file, "nerve JSON")->required()->check(CLI::ExistingFile);
      s->add_option("--cochain", cochain_file, "cochain JSON (default: the bundle's cochain)")->check(CLI::ExistingFile);
      s->callback([&, f] {
        action = [&, f] {
          const Json in = load(run, file);
          const LocalSystem sys = nerve_of(in);
          f(sys, io::cochain_from(part_of(run, in, cochain_file, {"cochain", "cocycle"}), sys));
        };
      });
    };
    cochain_cmd("coboundary", "apply the twisted Cech differential", [&](const LocalSystem& sys, const Cochain& c) {
      run.output = io::to_json(coboundary(c, sys), sys);
    });
    cochain_cmd("dd-check", "is a torus 2-cochain a cocycle mod Z", [&](const LocalSystem& sys, const Cochain& c) {
      run.output = {{"cocycle", dd_cocycle_check(c, sys)}};
    });
    cochain_cmd("dd-trivialize", "solve d(lambda) = c mod Z", [&](const LocalSystem& sys, const Cochain& c) {
      const auto lambda = dd_trivialize(c, sys);
      Json cls = Json::array();
      for (const auto& q : dd_class(c, sys)) cls.push_back(io::to_json(q));
      run.output = {{"trivializable", lambda.has_value()}, {"class", cls}};
      if (lambda) run.output["lambda"] = io::to_json(*lambda, sys);
    });
    auto* s = cech->add_subcommand("chern", "Chern class of torus transition data");
    s->add_option("file", file, "nerve JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--lifts", lifts_file, "lifts JSON (default: the bundle's lifts)")->check(CLI::ExistingFile);
    s->callback([&] {
      action = [&] {
        const Json in = load(run, file);
        const LocalSystem sys = nerve_of(in);
        const TransitionLifts t = io::lifts_from(part_of(run, in, lifts_file, {"lifts"}), sys);
        run.output = {{"cocycle", io::to_json(chern_cocycle(t, sys), sys)}, {"class", io::to_json(chern_class(t, sys))}};
      };
    });
  }

  // --- cookbook -------------------------------------------------------------------
  auto* book = app.add_subcommand("cookbook", "named worked examples")->require_subcommand(1);
  std::vector<std::string> names;
  bool all = false;
  std::string dir;
  {
    auto* c = book->add_subcommand("list", "scenario names and summaries");
    c->callback([&] {
      action = [&] {
        Json list = Json::array();
        for (const auto& s : cookbook::scenarios()) list.push_back({{"name", s.name}, {"summary", s.summary}});
        run.output = {{"scenarios", list}};
      };
    });
    c = book->add_subcommand("run", "run scenarios and report their checks");
    c->add_option("names", names, "scenario names");
    c->add_flag("--all", all, "run every scenario");
    c->callback([&] {
      action = [&] {
        if (all) {
          names.clear();
          for (const auto& s : cookbook::scenarios()) names.push_back(s.name);
        }
        if (names.empty()) throw Error(ErrorKind::InvalidInput, "name a scenario or pass --all");
        cookbook::Options opt;
        opt.seed = g.seed;
        opt.samples = sample_count(g, 0);
        Json results = Json::array();
        bool pass = true;
        for (const auto& n : names) {
          Json r = cookbook::run(cookbook::find(n), opt);
          pass = pass && r.at("pass").get<bool>();
          results.push_back(std::move(r));
        }
        run.output = {{"pass", pass}, {"scenarios", results}};
      };
    });
    c = book->add_subcommand("inputs", "write the scenario input files into a directory");
    c->add_option("dir", dir)->required();
    c->callback([&] {
      action = [&] {
        std::filesystem::create_directories(dir);
        Json written = Json::array();
        std::map<std::string, bool> seen;
        for (const auto& s : cookbook::scenarios()) {
          if (s.input.empty() || seen[s.input]) continue;
          seen[s.input] = true;
          const std::string path = (std::filesystem::path(dir) / (s.name + ".json")).string();
          spit(path, io::dump(Json::parse(s.input)));
          written.push_back(path);
        }
        run.output = {{"written", written}};
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (const auto* sub : app.get_subcommands()) {
    family = sub->get_name();
    run.command.push_back(family);
    for (const auto* leaf : sub->get_subcommands()) run.command.push_back(leaf->get_name());
  }

  set_thread_count(g.threads);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const Error& e) {
    std::cerr << "affinekit: " << e.what() << "\n";
    if (is_computation_failure(e.kind())) return 3;
    const auto hint = kSchemaHints.find(family);
    if (hint != kSchemaHints.end()) std::cerr << "expected input:\n  " << hint->second << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "affinekit: " << e.what() << "\n";
    return 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string text = io::dump(run.output);
  try {
    if (g.out.empty()) std::cout << text;
    else spit(g.out, text);
    if (!g.csv.empty() && !run.extra_text.empty()) spit(g.csv, run.extra_text);

    const std::string manifest_path = !g.manifest.empty() ? g.manifest : g.out.empty() ? "" : g.out + ".manifest.json";
    if (!manifest_path.empty()) {
      // arguments minus the ones that only affect where or how fast things run
      Json args = Json::array();
      static const std::set<std::string> skip = {"--threads", "--out", "--manifest", "--csv"};
      for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (skip.count(a)) {
          ++i;
          continue;
        }
        args.push_back(a);
      }
      Json inputs = Json::array();
      for (const auto& path : run.inputs) inputs.push_back({{"path", path}, {"sha256", sha256_hex(slurp(path))}});
      Json summary = {{"sha256", sha256_hex(text)}, {"bytes", text.size()}};
      if (run.output.contains("pass")) summary["pass"] = run.output.at("pass");
      if (!g.csv.empty()) summary["csv_sha256"] = sha256_hex(run.extra_text);
      Json m = {{"tool", "affinekit"},        {"version", AFFINEKIT_VERSION}, {"command", run.command}, {"arguments", args},
                {"inputs", inputs},           {"seed", g.seed},               {"outputs", summary},
                {"runtime", {{"wall_time_s", wall}, {"threads", thread_count()}}}};
      spit(manifest_path, io::dump(m));
    }
  } catch (const Error& e) {
    std::cerr << "affinekit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
