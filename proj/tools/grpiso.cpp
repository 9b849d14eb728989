// Command-line front end: isomorphism testing, canonical forms, series and
// structure inspection, group constructors, graph export and benchmarks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "grpiso/bench.hpp"
#include "grpiso/canonical_forms.hpp"
#include "grpiso/comp_series.hpp"
#include "grpiso/constructors.hpp"
#include "grpiso/graph_canon.hpp"
#include "grpiso/graph_encoding.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/iso_engine.hpp"
#include "grpiso/structure.hpp"

namespace {

grpiso::GroupTable load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw grpiso::ParseError("cannot open '" + path + "'");
  return grpiso::load_group(in);
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw grpiso::Error("cannot write '" + path + "'");
  out << data;
}

std::string format_members(const std::vector<int>& members_1based, bool star) {
  std::string line;
  for (size_t i = 0; i < members_1based.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(members_1based[i]);
  }
  if (star) line += " *";
  return line;
}

std::string series_text(const grpiso::LabeledSeries& s) {
  std::string out;
  for (size_t i = 0; i < s.chain.size(); ++i) {
    std::vector<int> members;
    for (int x : s.chain[i].elements()) members.push_back(x + 1);
    out += format_members(members, s.socle_flags[i] != 0);
    out += '\n';
  }
  return out;
}

grpiso::ChoiceSeq parse_choices(const std::string& text) {
  grpiso::ChoiceSeq seq;
  std::stringstream levels(text);
  std::string level;
  while (std::getline(levels, level, '|')) {
    std::vector<int> steps;
    std::stringstream ss(level);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) steps.push_back(std::stoi(tok));
    seq.per_level.push_back(std::move(steps));
  }
  return seq;
}

std::string table_gtab(const std::vector<std::vector<int>>& m) {
  std::string out = std::to_string(m.size());
  out += '\n';
  for (const auto& row : m) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += std::to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite group isomorphism and canonical forms over multiplication tables"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  int jobs = 1;
  long long resource_limit = 400'000'000;
  bool json_out = false;
  app.add_option("--seed", seed, "random seed");
  app.add_option("--jobs", jobs, "worker threads for bench");
  app.add_option("--resource-limit", resource_limit, "canonization work budget");
  app.add_flag("--json", json_out, "machine-readable output");

  // iso
  auto* iso = app.add_subcommand("iso", "decide isomorphism of two groups");
  std::string iso_a, iso_b, iso_method = "auto";
  long long iso_samples = 0;
  bool iso_witness = false, iso_noprefilter = false;
  iso->add_option("a", iso_a, "first .gtab file")->required();
  iso->add_option("b", iso_b, "second .gtab file")->required();
  iso->add_option("--method", iso_method, "auto|genenum|pgroup|solvable|randomized");
  iso->add_option("--samples", iso_samples, "sample count for the randomized method");
  iso->add_flag("--witness", iso_witness, "print an isomorphism when found");
  iso->add_flag("--no-prefilter", iso_noprefilter, "disable the order-multiset prefilter");

  // canon
  auto* canon = app.add_subcommand("canon", "canonical form of a group");
  std::string canon_in, canon_route = "auto";
  bool canon_series_dump = false, canon_hall_dump = false;
  canon->add_option("g", canon_in, ".gtab file")->required();
  canon->add_option("--route", canon_route, "auto|genenum|series");
  canon->add_flag("--series", canon_series_dump, "dump the composition-series canonical tuple");
  canon->add_flag("--hall", canon_hall_dump, "dump the Hall canonical tuple");

  // series
  auto* series = app.add_subcommand("series", "composition series of a group");
  std::string series_in, series_choices;
  bool series_all = false, series_count = false;
  series->add_option("g", series_in, ".gtab file")->required();
  series->add_option("--choices", series_choices, "replay choices, levels '|', steps ','");
  series->add_flag("--all", series_all, "enumerate every choice sequence");
  series->add_flag("--count", series_count, "print the number of choice sequences");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "structural classification");
  std::string analyze_in;
  analyze->add_option("g", analyze_in, ".gtab file")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "construct a group table");
  std::string gen_kind, gen_out;
  std::vector<long long> gen_params;
  gen->add_option("kind", gen_kind,
                  "cyclic|direct-product|dihedral|quaternion8|heisenberg|"
                  "semidirect-pq|sym|alt|tight-family")
      ->required();
  gen->add_option("params", gen_params, "integer parameters");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark harness, CSV output");
  std::string bench_corpus = "mixed", bench_methods = "auto", bench_out;
  int bench_reps = 1;
  bench->add_option("--corpus", bench_corpus, "none|mixed|pow2|tight|heisenberg");
  bench->add_option("--methods", bench_methods, "comma-separated method list");
  bench->add_option("--reps", bench_reps, "repetitions per pair");
  bench->add_option("-o,--out", bench_out, "output file (default stdout)");

  // graph-export
  auto* gexp = app.add_subcommand("graph-export", "cone graph of the default series");
  std::string gexp_in, gexp_kind = "x", gexp_out;
  bool gexp_digest = false;
  gexp->add_option("g", gexp_in, ".gtab file")->required();
  gexp->add_option("--graph", gexp_kind, "x (cone graph) or t (coset tree)");
  gexp->add_option("-o,--out", gexp_out, "output file (default stdout)");
  gexp->add_flag("--digest", gexp_digest, "print the canonical encoding digest instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*iso) {
      grpiso::GroupTable a = load_file(iso_a), b = load_file(iso_b);
      grpiso::IsoOptions opts;
      opts.prefilter = !iso_noprefilter;
      opts.want_witness = iso_witness;
      opts.samples = iso_samples;
      opts.seed = seed;
      opts.canon_budget = resource_limit;
      grpiso::IsoVerdict v =
          grpiso::decide_iso(a, b, grpiso::iso_method_from_string(iso_method), opts);
      if (json_out) {
        nlohmann::json j{{"isomorphic", v.isomorphic},
                         {"method", v.method},
                         {"choices", v.stats.choices},
                         {"canonizations", v.stats.canonizations},
                         {"millis", v.stats.millis}};
        if (v.witness) {
          std::vector<int> w;
          for (int x : *v.witness) w.push_back(x + 1);
          j["witness"] = w;
        }
        std::cout << j.dump() << "\n";
      } else {
        std::cout << (v.isomorphic ? "isomorphic" : "not isomorphic") << " (method "
                  << v.method << ", choices " << v.stats.choices << ", canonizations "
                  << v.stats.canonizations << ")\n";
        if (v.witness) {
          std::cout << "witness:";
          for (int x : *v.witness) std::cout << ' ' << x + 1;
          std::cout << "\n";
        }
      }
      return v.isomorphic ? 0 : 1;
    }

    if (*canon) {
      grpiso::GroupTable g = load_file(canon_in);
      grpiso::CanonOptions copts{resource_limit, nullptr};
      if (canon_series_dump) {
        grpiso::LabeledSeries s = grpiso::composition_series(g);
        grpiso::SeriesCanon sc = grpiso::can_series_full(s, copts);
        std::cout << "table:\n" << table_gtab(sc.can.m);
        for (size_t i = 0; i < sc.can.images.size(); ++i)
          std::cout << "image G_" << i << ": " << format_members(sc.can.images[i], false)
                    << "\n";
        std::cout << "digest: " << grpiso::hex_digest(sc.inv) << "\n";
        return 0;
      }
      if (canon_hall_dump) {
        grpiso::SylowBasis basis = grpiso::sylow_basis(g);
        grpiso::HallSeries hs = grpiso::default_hall_series(g, basis);
        grpiso::HallCanon hc = grpiso::can_hall_full(hs, copts);
        std::cout << "table:\n" << table_gtab(hc.can.m);
        for (size_t i = 0; i < hc.can.sylow_images.size(); ++i) {
          std::cout << "sylow p=" << basis.primes[i] << ": "
                    << format_members(hc.can.sylow_images[i], false) << "\n";
          for (size_t j = 0; j < hc.can.series_images[i].size(); ++j)
            std::cout << "  P_" << i + 1 << "," << j << ": "
                      << format_members(hc.can.series_images[i][j], false) << "\n";
        }
        std::cout << "digest: " << grpiso::hex_digest(hc.inv) << "\n";
        return 0;
      }
      grpiso::CanGroup cg;
      if (canon_route == "genenum") {
        cg = grpiso::can_group_genenum(g);
      } else if (canon_route == "series") {
        cg = grpiso::can_group_series(g, grpiso::GroupCanonOptions{copts});
      } else {
        grpiso::Classification cls = grpiso::classify(g);
        cg = (cls.is_p_group || cls.is_solvable)
                 ? grpiso::can_group_series(g, grpiso::GroupCanonOptions{copts})
                 : grpiso::can_group_genenum(g);
      }
      std::string table = table_gtab(cg.m);
      std::cout << table << "digest: " << grpiso::hex_digest(table) << "\n";
      return 0;
    }

    if (*series) {
      grpiso::GroupTable g = load_file(series_in);
      if (series_count) {
        std::cout << grpiso::count_choices(g) << "\n";
        return 0;
      }
      if (series_all) {
        grpiso::enumerate_series(
            g, [&](const grpiso::ChoiceSeq& c, const grpiso::LabeledSeries& s) {
              std::string tag = "choice:";
              for (size_t li = 0; li < c.per_level.size(); ++li) {
                tag += li ? "|" : " ";
                for (size_t k = 0; k < c.per_level[li].size(); ++k)
                  tag += (k ? "," : "") + std::to_string(c.per_level[li][k]);
              }
              std::cout << tag << "\n" << series_text(s) << "\n";
              return true;
            });
        return 0;
      }
      if (!series_choices.empty()) {
        grpiso::ChoiceSeq seq = parse_choices(series_choices);
        std::cout << series_text(grpiso::composition_series(g, seq));
      } else {
        std::cout << series_text(grpiso::composition_series(g));
      }
      return 0;
    }

    if (*analyze) {
      grpiso::GroupTable g = load_file(analyze_in);
      grpiso::Classification c = grpiso::classify(g);
      std::cout << "order: " << c.order << "\n";
      std::string f;
      for (auto [p, e] : c.factorization) {
        if (!f.empty()) f += ' ';
        f += std::to_string(p) + "^" + std::to_string(e);
      }
      std::cout << "factorization: " << (f.empty() ? "1" : f) << "\n";
      std::cout << "p-group: " << (c.is_p_group ? "yes" : "no") << "\n";
      if (c.is_p_group) std::cout << "p: " << c.p << "\n";
      std::cout << "nilpotent: " << (c.is_nilpotent ? "yes" : "no") << "\n";
      std::cout << "solvable: " << (c.is_solvable ? "yes" : "no") << "\n";
      return 0;
    }

    if (*gen) {
      grpiso::GroupTable g = grpiso::construct({gen_kind, gen_params});
      write_output(gen_out, grpiso::write_gtab(g));
      return 0;
    }

    if (*bench) {
      std::vector<std::string> methods;
      std::stringstream ss(bench_methods);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) methods.push_back(tok);
      grpiso::IsoOptions opts;
      opts.seed = seed;
      opts.canon_budget = resource_limit;
      auto pairs = grpiso::bench_corpus(bench_corpus, seed);
      auto rows = grpiso::run_bench(pairs, methods, bench_reps, jobs, opts);
      write_output(bench_out, grpiso::bench_csv(rows));
      return 0;
    }

    if (*gexp) {
      grpiso::GroupTable g = load_file(gexp_in);
      grpiso::LabeledSeries s = grpiso::composition_series(g);
      if (gexp_kind == "t") {
        grpiso::EncTree t = grpiso::build_T(s);
        grpiso::ColoredGraph cg(t.nodes);
        cg.colors = t.color;
        cg.colors[0] = grpiso::kColorRoot;
        for (int v = 1; v < t.nodes; ++v) cg.add_edge(v, t.parent[v]);
        cg.finalize();
        write_output(gexp_out, grpiso::to_dimacs(cg));
      } else {
        grpiso::XGraph x = grpiso::build_X(s);
        if (gexp_digest) {
          grpiso::CanonOptions copts{resource_limit, nullptr};
          auto cf = grpiso::canonical_form(x.graph, copts);
          std::cout << grpiso::hex_digest(cf.encoding) << "\n";
        } else {
          write_output(gexp_out, grpiso::to_dimacs(x.graph));
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
