#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "typact/approx.hpp"
#include "typact/duality.hpp"
#include "typact/json_io.hpp"
#include "typact/lnk.hpp"

namespace typact::cli {

inline constexpr const char* kSchemaVersion = "typact-report/1";

struct Context {
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 2'000'000;    // work budget (enumeration nodes, subsets)
  std::uint64_t max_order = 256;       // oracle bound
  std::uint64_t max_q = 2520;          // cap for the default lcm partition chain
  std::vector<std::uint64_t> levels;   // explicit partition sequence, optional

  PartitionSequence sequence() const {
    return levels.empty() ? PartitionSequence::lcm_chain(max_q) : PartitionSequence(levels);
  }

  // Randomized subcommands: --seed is required with --json (reproducibility),
  // auto-generated and echoed otherwise.
  std::uint64_t require_seed(Json& report) {
    if (!seed) {
      if (json) throw ParseError("--seed is required with --json for randomized commands");
      seed = std::random_device{}();
    }
    report["seed"] = *seed;
    return *seed;
  }
};

namespace detail {

inline std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  return out;
}

inline std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoll(item));
  return out;
}

// "2,0;1,1" -> element indices of the given table
inline std::vector<std::uint64_t> parse_elements(const FiniteAbelian& g, const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string tuple;
  while (std::getline(ss, tuple, ';')) {
    if (tuple.empty()) continue;
    out.push_back(g.index_of(parse_u64_list(tuple)));
  }
  return out;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

inline Json tuples_json(const FiniteAbelian& g, const std::vector<std::uint32_t>& elems) {
  Json arr = Json::array();
  for (std::uint32_t e : elems) arr.push_back(g.tuple_of(e));
  return arr;
}

inline std::vector<Extent> parse_orders(const std::string& text) {
  std::vector<Extent> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item == "inf" ? Extent::omega() : Extent(std::stoull(item)));
  return out;
}

}  // namespace detail

class Report {
 public:
  Report(const std::vector<std::string>& args) : start_(std::chrono::steady_clock::now()) {
    body_["schema"] = kSchemaVersion;
    body_["command"] = args;
  }

  Json& json() { return body_; }
  void inputs(Json j) { body_["inputs"] = std::move(j); }
  void result(Json j) { body_["result"] = std::move(j); }
  void human(std::string text) { human_ = std::move(text); }

  void emit(std::ostream& out, bool as_json) {
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start_)
                    .count();
    body_["timing_ms"] = ms;
    if (as_json)
      out << body_.dump(2) << "\n";
    else
      out << human_;
  }

 private:
  Json body_;
  std::string human_;
  std::chrono::steady_clock::time_point start_;
};

namespace detail {

inline void cmd_classify(const std::string& question, const std::string& h_text,
                         const std::string& g_text, Report& rep) {
  GroupDesc g = parse_group(g_text);
  std::ostringstream hum;
  if (question == "monothetic") {
    Decision d = generically_monothetic(g);
    rep.inputs(Json{{"g", serialize_group(g)}});
    Json payload = decision_to_json(question, "", serialize_group(g), d);
    payload.erase("h");
    rep.result(payload);
    hum << "generically monothetic centralizer: " << (d.answer ? "yes" : "no") << "  [rule "
        << d.rule << "]\n";
    rep.human(hum.str());
    return;
  }
  GroupDesc h = parse_group(h_text);
  Decision d;
  Json also = Json::array();
  if (question == "embeds") {
    d = embeds(h, g);
  } else if (question == "weak-iso") {
    d = weak_isomorphic(h, g);
  } else if (question == "extend-free") {
    d = extends_to_free(h, g);
    also.push_back("restriction-map-category-preserving");
  } else if (question == "extend-any") {
    d = extends_to_any(h, g);
    also.push_back("complement-with-weakly-isomorphic-quotient-exists");
  } else {
    throw ParseError("unknown classify question: " + question);
  }
  rep.inputs(Json{{"h", serialize_group(h)}, {"g", serialize_group(g)}});
  Json payload = decision_to_json(question, serialize_group(h), serialize_group(g), d);
  if (!also.empty()) payload["also_answers"] = also;
  rep.result(payload);
  hum << question << ": " << (d.answer ? "yes" : "no") << "  [rule " << d.rule << "]\n";
  if (d.witness) {
    GroupDesc w;
    w.cyclic = *d.witness;
    hum << "witness H' = " << serialize_group(w) << "\n";
  }
  rep.human(hum.str());
}

inline void cmd_dual_ann(const std::string& group, const std::string& gens, Context& ctx,
                         Report& rep) {
  FiniteAbelian g(parse_u64_list(group));
  std::vector<std::uint64_t> hg = parse_elements(g, gens);
  std::vector<std::uint32_t> sub = subgroup_closure(g, hg);
  std::vector<std::uint32_t> ann = annihilator(g, hg);
  rep.inputs(Json{{"group", g.factors()}, {"subgroup_generators", gens}});
  rep.result(Json{{"subgroup", Json{{"order", sub.size()}, {"elements", tuples_json(g, sub)}}},
                  {"annihilator",
                   Json{{"order", ann.size()}, {"elements", tuples_json(g, ann)}}}});
  std::ostringstream hum;
  hum << "|H| = " << sub.size() << ", |Ann H| = " << ann.size() << " (|G| = " << g.order()
      << ")\n";
  rep.human(hum.str());
  (void)ctx;
}

inline void cmd_dual_spectral(const std::string& group, const std::string& hg,
                              const std::string& kg, Context& ctx, Report& rep) {
  FiniteAbelian g(parse_u64_list(group));
  SpectralCriterion crit =
      spectral_criterion(g, parse_elements(g, hg), parse_elements(g, kg));
  rep.inputs(Json{{"group", g.factors()}, {"h", hg}, {"k", kg}});
  rep.result(Json{{"lhs_sum_is_whole", crit.lhs},
                  {"rhs_annihilators_meet_trivially", crit.rhs},
                  {"equal", crit.lhs == crit.rhs}});
  std::ostringstream hum;
  hum << "H+K=G: " << (crit.lhs ? "yes" : "no")
      << "; Ann H ∩ Ann K trivial: " << (crit.rhs ? "yes" : "no") << "\n";
  rep.human(hum.str());
  (void)ctx;
}

inline void cmd_dual_spectrum(const std::string& group, const std::string& space,
                              const std::string& images, Context& ctx, Report& rep) {
  FiniteAbelian g(parse_u64_list(group));
  FiniteAbelian x(parse_u64_list(space));
  std::vector<std::uint64_t> imgs = parse_elements(x, images);
  TranslationAction act(g, x, imgs);
  Spectrum sp = spectrum_of_translation(act);
  rep.inputs(Json{{"group", g.factors()}, {"space", x.factors()}, {"images", images}});
  rep.result(Json{{"order", sp.characters.size()},
                  {"characters", tuples_json(g, sp.characters)},
                  {"ergodic", sp.ergodic}});
  std::ostringstream hum;
  hum << "|Λ| = " << sp.characters.size() << (sp.ergodic ? " (ergodic)" : " (not ergodic)")
      << "\n";
  rep.human(hum.str());
  (void)ctx;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"typact: decision procedures and exact finite simulation for extensions of "
               "typical abelian group actions"};
  app.require_subcommand(1);

  Context ctx;
  if (const char* env = std::getenv("TYPACT_BUDGET")) ctx.budget = std::strtoull(env, nullptr, 10);
  std::string levels_text;
  app.add_flag("--json", ctx.json, "emit a JSON report");
  app.add_option("--seed", ctx.seed, "seed for randomized subcommands");
  app.add_option("--budget", ctx.budget, "work budget (enumeration nodes / subsets)");
  app.add_option("--max-order", ctx.max_order, "oracle group-order bound");
  app.add_option("--max-q", ctx.max_q, "cap for the default partition sequence");
  app.add_option("--levels", levels_text, "explicit partition sequence, e.g. 2,4,8");

  // classify
  CLI::App* classify_cmd = app.add_subcommand("classify", "group-pair decision procedures");
  classify_cmd->require_subcommand(1);
  struct ClassifyArgs {
    std::string h, g;
  } cargs;
  for (const char* q : {"weak-iso", "embeds", "extend-free", "extend-any"}) {
    CLI::App* sub = classify_cmd->add_subcommand(q);
    sub->add_option("H", cargs.h, "subgroup expression")->required();
    sub->add_option("G", cargs.g, "group expression")->required();
  }
  classify_cmd->add_subcommand("monothetic")
      ->add_option("G", cargs.g, "group expression")
      ->required();

  // dual
  CLI::App* dual_cmd = app.add_subcommand("dual", "finite character theory");
  dual_cmd->require_subcommand(1);
  struct DualArgs {
    std::string group, space, h, k, images;
  } dargs;
  CLI::App* ann = dual_cmd->add_subcommand("ann", "annihilator of a subgroup");
  ann->add_option("group", dargs.group, "invariant factors, e.g. 4,2")->required();
  ann->add_option("gens", dargs.h, "subgroup generators, e.g. 2,0;0,1");
  CLI::App* spectral = dual_cmd->add_subcommand("spectral", "sum-vs-annihilator criterion");
  spectral->add_option("group", dargs.group)->required();
  spectral->add_option("hgens", dargs.h, "generators of H");
  spectral->add_option("kgens", dargs.k, "generators of K");
  CLI::App* spectrum = dual_cmd->add_subcommand("spectrum", "spectrum of a translation action");
  spectrum->add_option("group", dargs.group)->required();
  spectrum->add_option("space", dargs.space)->required();
  spectrum->add_option("images", dargs.images, "generator images, e.g. 1;0")->required();

  // sim
  CLI::App* sim_cmd = app.add_subcommand("sim", "finite action simulator");
  sim_cmd->require_subcommand(1);
  struct SimArgs {
    std::string file_a, file_b, k_text = "1", h_text, elem_a, elem_b, orders, relations, eps = "1/4",
                perm_text;
    std::vector<std::string> defect_files;
    std::uint64_t q = 2, samples = 0, dn_level = 0, expected_order = 0, sample_count = 0;
    std::optional<std::uint64_t> max_q_probe;
    bool transitive = false, full_search = false;
  } sargs;
  CLI::App* s_extend = sim_cmd->add_subcommand("extend", "adjoin a generator (finite action)");
  s_extend->add_option("action", sargs.file_a, "action JSON file")->required();
  s_extend->add_option("--k", sargs.k_text, "minimal multiple (integer or inf)")->required();
  s_extend->add_option("--base-elem", sargs.h_text, "base element hit by k·g, e.g. 1,0");
  s_extend->add_option("--expected-order", sargs.expected_order,
                       "declared order of the adjoined generator");
  CLI::App* s_metric = sim_cmd->add_subcommand("metric", "exact metric between two elements");
  s_metric->add_option("a", sargs.file_a)->required();
  s_metric->add_option("b", sargs.file_b)->required();
  s_metric->add_option("--elem-a", sargs.elem_a, "exponents in the first action");
  s_metric->add_option("--elem-b", sargs.elem_b, "exponents in the second action");
  s_metric->add_option("--dn", sargs.dn_level, "also print d_n at this level");
  CLI::App* s_lnk = sim_cmd->add_subcommand("lnk", "enumerate or sample L_{n,k}");
  s_lnk->add_option("--orders", sargs.orders, "generator orders, e.g. 2,3 or inf")->required();
  s_lnk->add_option("--relations", sargs.relations, "extra relations, e.g. 2,-1;0,3");
  s_lnk->add_option("--q", sargs.q, "block count")->required();
  s_lnk->add_flag("--transitive", sargs.transitive, "restrict to the transitive family");
  s_lnk->add_option("--sample", sargs.sample_count, "sample this many members instead");
  CLI::App* s_probe = sim_cmd->add_subcommand("probe", "density probe toward a target action");
  s_probe->add_option("target", sargs.file_a)->required();
  s_probe->add_option("--eps", sargs.eps, "success threshold (rational)");
  s_probe->add_option("--max-q-level", sargs.max_q_probe, "restrict candidate levels");
  s_probe->add_option("--samples", sargs.samples, "samples per level when enumeration is too big");
  s_probe->add_flag("--transitive", sargs.transitive);
  CLI::App* s_defect = sim_cmd->add_subcommand("defect", "good-approximation defect (CSV rows)");
  s_defect->add_option("target", sargs.file_a)->required();
  s_defect->add_option("approximants", sargs.defect_files, "approximating action files")
      ->required();
  CLI::App* s_cent = sim_cmd->add_subcommand("centralizer", "commuting block permutations");
  s_cent->add_option("action", sargs.file_a)->required();
  s_cent->add_flag("--full", sargs.full_search, "force the full symmetric-group scan");
  CLI::App* s_wit = sim_cmd->add_subcommand("witness", "weak-closure witness for a permutation");
  s_wit->add_option("action", sargs.file_a)->required();
  s_wit->add_option("--perm", sargs.perm_text, "1-indexed permutation, e.g. 2,3,1")->required();
  CLI::App* s_param = sim_cmd->add_subcommand("param", "canonical marked parametrization");
  s_param->add_option("action", sargs.file_a)->required();
  CLI::App* s_rge = sim_cmd->add_subcommand("rge", "relation-guided extension");
  s_rge->add_option("spec", sargs.file_a, "instance JSON file")->required();

  // chacon
  CLI::App* chacon_cmd = app.add_subcommand("chacon", "matrix selection lemma");
  chacon_cmd->require_subcommand(1);
  struct ChaconArgs {
    std::string file;
    std::uint64_t gamma = 1;
  } chargs;
  chacon_cmd->add_subcommand("select")->add_option("instance", chargs.file)->required();
  CLI::App* ch_verify = chacon_cmd->add_subcommand("verify");
  ch_verify->add_option("instance", chargs.file)->required();
  ch_verify->add_option("--gamma", chargs.gamma, "1-indexed row to verify")->required();

  // oracle
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "finite brute-force oracles");
  oracle_cmd->require_subcommand(1);
  struct OracleArgs {
    std::string h, g;
    bool with_elements = false;
  } oargs;
  CLI::App* o_sub = oracle_cmd->add_subcommand("subgroups");
  o_sub->add_option("G", oargs.g, "invariant factors, e.g. 4,2")->required();
  o_sub->add_flag("--elements", oargs.with_elements, "include element lists");
  CLI::App* o_emb = oracle_cmd->add_subcommand("embeds");
  o_emb->add_option("H", oargs.h)->required();
  o_emb->add_option("G", oargs.g)->required();

  // let global flags (--json, --seed, budgets) appear after the subcommand
  auto enable_fallthrough = [](CLI::App* a, auto&& self) -> void {
    a->fallthrough();
    for (CLI::App* s : a->get_subcommands(std::function<bool(CLI::App*)>{})) self(s, self);
  };
  enable_fallthrough(&app, enable_fallthrough);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  Report rep(args);
  try {
    if (!levels_text.empty()) ctx.levels = detail::parse_u64_list(levels_text);

    if (classify_cmd->parsed()) {
      CLI::App* sub = classify_cmd->get_subcommands().front();
      detail::cmd_classify(sub->get_name(), cargs.h, cargs.g, rep);
    } else if (dual_cmd->parsed()) {
      if (ann->parsed()) detail::cmd_dual_ann(dargs.group, dargs.h, ctx, rep);
      if (spectral->parsed()) detail::cmd_dual_spectral(dargs.group, dargs.h, dargs.k, ctx, rep);
      if (spectrum->parsed())
        detail::cmd_dual_spectrum(dargs.group, dargs.space, dargs.images, ctx, rep);
    } else if (sim_cmd->parsed()) {
      PartitionSequence seq = ctx.sequence();
      std::ostringstream hum;
      if (s_extend->parsed()) {
        FiniteAction base = action_from_json(detail::load_json_file(sargs.file_a));
        Extent k = sargs.k_text == "inf" ? Extent::omega() : Extent(std::stoull(sargs.k_text));
        std::optional<std::vector<long long>> h;
        if (!sargs.h_text.empty() || k.is_finite())
          h = detail::parse_ll_list(sargs.h_text);
        std::optional<std::uint64_t> expected;
        if (sargs.expected_order != 0) expected = sargs.expected_order;
        FiniteAction ext = extend_finite_action(base, k, h, expected);
        rep.inputs(Json{{"action", action_to_json(base)}});
        rep.result(Json{{"extended", action_to_json(ext)}});
        hum << "extended to q = " << ext.q << " with " << ext.arity() << " generators\n";
      } else if (s_metric->parsed()) {
        FiniteAction a = action_from_json(detail::load_json_file(sargs.file_a));
        FiniteAction b = action_from_json(detail::load_json_file(sargs.file_b));
        std::vector<long long> ea =
            sargs.elem_a.empty() ? std::vector<long long>{1} : detail::parse_ll_list(sargs.elem_a);
        std::vector<long long> eb =
            sargs.elem_b.empty() ? std::vector<long long>{1} : detail::parse_ll_list(sargs.elem_b);
        ea.resize(a.arity(), 0);
        eb.resize(b.arity(), 0);
        BlockMap ma = a.evaluate(ea), mb = b.evaluate(eb);
        MetricValue d = metric_d(seq, ma, mb, ctx.budget);
        rep.inputs(Json{{"a", action_to_json(a)}, {"b", action_to_json(b)},
                        {"elem_a", ea}, {"elem_b", eb}});
        Json res{{"d", metric_to_json(d)}};
        if (sargs.dn_level > 0)
          res["dn"] = rat_str(metric_dn(seq, ma, mb, sargs.dn_level, ctx.budget));
        rep.result(res);
        hum << "d = " << rat_str(d.a) << " + " << rat_str(d.b) << "·ζ(2) ≈ " << d.approx()
            << "\n";
      } else if (s_lnk->parsed()) {
        Presentation pres;
        pres.orders = detail::parse_orders(sargs.orders);
        if (!sargs.relations.empty()) {
          std::stringstream ss(sargs.relations);
          std::string rel;
          while (std::getline(ss, rel, ';'))
            if (!rel.empty()) pres.relations.push_back(detail::parse_ll_list(rel));
        }
        LnkOptions lopts;
        lopts.transitive = sargs.transitive;
        lopts.node_budget = ctx.budget;
        Json members = Json::array();
        if (sargs.sample_count > 0) {
          std::mt19937_64 rng(ctx.require_seed(rep.json()));
          for (std::uint64_t i = 0; i < sargs.sample_count; ++i)
            members.push_back(action_to_json(sample_lnk(pres, sargs.q, lopts, rng)));
        } else {
          for (const FiniteAction& a : build_lnk(pres, sargs.q, lopts))
            members.push_back(action_to_json(a));
        }
        rep.inputs(Json{{"orders", sargs.orders}, {"q", sargs.q},
                        {"transitive", sargs.transitive}});
        rep.result(Json{{"count", members.size()}, {"members", members}});
        hum << members.size() << " member(s)\n";
      } else if (s_probe->parsed()) {
        FiniteAction target = action_from_json(detail::load_json_file(sargs.file_a));
        ProbeOptions popts;
        popts.eps = parse_rat(sargs.eps);
        popts.max_q = sargs.max_q_probe;
        popts.enumeration_budget = ctx.budget;
        popts.samples_per_level = sargs.samples;
        popts.transitive = sargs.transitive;
        if (sargs.samples > 0) popts.seed = ctx.require_seed(rep.json());
        ProbeResult res = density_probe(seq, target, popts);
        rep.inputs(Json{{"target", action_to_json(target)}, {"eps", sargs.eps}});
        Json jr{{"certified", res.certified},
                {"budget_exhausted", res.budget_exhausted},
                {"candidates", res.candidates},
                {"levels", res.levels_searched}};
        if (res.distance) jr["distance"] = metric_to_json(*res.distance);
        if (res.best) jr["best"] = action_to_json(*res.best);
        rep.result(jr);
        hum << "candidates: " << res.candidates
            << (res.distance ? ", best ≈ " + std::to_string(res.distance->approx()) : "")
            << (res.certified ? " (within eps)" : "") << "\n";
      } else if (s_defect->parsed()) {
        FiniteAction target = action_from_json(detail::load_json_file(sargs.file_a));
        Json rows = Json::array();
        hum << "file,q,defect,window_terms\n";
        for (const std::string& f : sargs.defect_files) {
          FiniteAction p = action_from_json(detail::load_json_file(f));
          DefectResult res = good_approx_defect(target, p);
          rows.push_back(Json{{"file", f}, {"q", p.q}, {"defect", rat_str(res.defect)},
                              {"window_terms", res.window_terms}});
          hum << f << "," << p.q << "," << rat_str(res.defect) << "," << res.window_terms
              << "\n";
        }
        rep.inputs(Json{{"target", action_to_json(target)}});
        rep.result(Json{{"rows", rows}});
      } else if (s_cent->parsed()) {
        FiniteAction a = action_from_json(detail::load_json_file(sargs.file_a));
        CentralizerOptions copts;
        copts.force_full_search = sargs.full_search;
        copts.result_budget = ctx.budget;
        std::vector<Permutation> cent = centralizer(a, copts);
        Json elems = Json::array();
        for (const Permutation& p : cent) elems.push_back(perm_to_json(p));
        rep.inputs(Json{{"action", action_to_json(a)}});
        rep.result(Json{{"order", cent.size()}, {"elements", elems}});
        hum << "centralizer order " << cent.size() << "\n";
      } else if (s_wit->parsed()) {
        FiniteAction a = action_from_json(detail::load_json_file(sargs.file_a));
        Permutation s = perm_from_json(Json(detail::parse_u64_list(sargs.perm_text)));
        ClosureWitness w = weak_closure_witness(a, s);
        rep.inputs(Json{{"action", action_to_json(a)}, {"perm", sargs.perm_text}});
        rep.result(Json{{"element", w.element}, {"tuple", w.tuple}});
        hum << "g = (";
        for (std::size_t i = 0; i < w.element.size(); ++i)
          hum << (i ? "," : "") << w.element[i];
        hum << ")\n";
      } else if (s_param->parsed()) {
        FiniteAction a = action_from_json(detail::load_json_file(sargs.file_a));
        Parametrization par = canonical_parametrization(a);
        Json blocks = Json::array();
        for (std::uint32_t b : par.block_of_tuple) blocks.push_back(b + 1);
        rep.inputs(Json{{"action", action_to_json(a)}});
        rep.result(Json{{"orders", par.orders}, {"basis", par.basis},
                        {"block_of_tuple", blocks}});
        hum << "orders:";
        for (std::uint64_t o : par.orders) hum << " " << o;
        hum << "\n";
      } else if (s_rge->parsed()) {
        Json spec = detail::load_json_file(sargs.file_a);
        FiniteAction base = action_from_json(spec.at("base"));
        RelationData rel;
        for (const auto& item : spec.at("relations")) {
          RelationSpec rs;
          rs.s = extent_from_json(item.at("s"));
          if (item.contains("h")) rs.base_element = item.at("h").get<std::vector<long long>>();
          if (item.contains("k")) rs.k_coeffs = item.at("k").get<std::vector<long long>>();
          rel.items.push_back(std::move(rs));
        }
        std::vector<std::vector<long long>> approx =
            spec.at("approx").get<std::vector<std::vector<long long>>>();
        Rat gamma = rat_from_json(spec.at("gamma"));
        std::optional<FiniteAction> target;
        if (spec.contains("target")) target = action_from_json(spec.at("target"));
        PartitionSequence rge_seq =
            spec.contains("levels")
                ? PartitionSequence(spec.at("levels").get<std::vector<std::uint64_t>>())
                : seq;
        RgeResult res = relation_guided_extension(rge_seq, base, approx, rel, gamma, target);
        Json dev = Json::array(), bnd = Json::array();
        for (const MetricValue& d : res.deviation) dev.push_back(metric_to_json(d));
        for (const Rat& b : res.bound) bnd.push_back(rat_str(b));
        Json jr{{"extended", action_to_json(res.extended)}, {"deviation", dev},
                {"bound", bnd}, {"bound_holds", res.bound_holds}};
        if (res.hypotheses) {
          jr["hypotheses"] = Json{{"approx_close", res.hypotheses->approx_close},
                                  {"tail_small", res.hypotheses->tail_small},
                                  {"base_close", res.hypotheses->base_close},
                                  {"powers_close", res.hypotheses->powers_close},
                                  {"composites_close", res.hypotheses->composites_close},
                                  {"all", res.hypotheses->all()}};
        }
        rep.inputs(Json{{"spec", spec}});
        rep.result(jr);
        hum << "extended to q = " << res.extended.q << "; deviation bound "
            << (res.bound_holds ? "holds" : "fails") << "\n";
      }
      rep.human(hum.str());
    } else if (chacon_cmd->parsed()) {
      ChaconInstance inst = chacon_from_json(detail::load_json_file(chargs.file));
      std::ostringstream hum;
      if (chacon_cmd->get_subcommands().front()->get_name() == "select") {
        ChaconSelection sel = chacon_select(inst);
        ChaconReport r = chacon_verify(inst, sel.gamma);
        rep.inputs(chacon_to_json(inst));
        rep.result(Json{{"gamma", sel.gamma + 1}, {"score", rat_str(sel.score)},
                        {"bound", rat_str(r.bound)}, {"hypothesis", r.hypothesis},
                        {"pass", r.pass}});
        hum << "gamma = " << sel.gamma + 1 << ", score = " << rat_str(sel.score) << " >= "
            << rat_str(r.bound) << "\n";
      } else {
        if (chargs.gamma == 0) throw ParseError("--gamma is 1-indexed");
        ChaconReport r = chacon_verify(inst, chargs.gamma - 1);
        rep.inputs(chacon_to_json(inst));
        rep.result(Json{{"gamma", chargs.gamma}, {"score", rat_str(r.score)},
                        {"bound", rat_str(r.bound)}, {"hypothesis", r.hypothesis},
                        {"pass", r.pass}});
        hum << "score = " << rat_str(r.score) << ", bound = " << rat_str(r.bound) << ", "
            << (r.pass ? "pass" : "fail") << (r.hypothesis ? "" : " (hypothesis not satisfied)")
            << "\n";
      }
      rep.human(hum.str());
    } else if (oracle_cmd->parsed()) {
      std::ostringstream hum;
      if (o_sub->parsed()) {
        FiniteGroupTable g(detail::parse_u64_list(oargs.g));
        std::vector<Subgroup> subs = oracle_subgroups(g, ctx.max_order);
        Json arr = Json::array();
        for (const Subgroup& s : subs) {
          Json js{{"order", s.elements.size()}, {"invariant_factors", s.iso_factors}};
          if (oargs.with_elements) {
            Json elems = Json::array();
            for (std::uint32_t e : s.elements) elems.push_back(g.tuple_of(e));
            js["elements"] = elems;
          }
          arr.push_back(js);
        }
        rep.inputs(Json{{"group", g.factors()}});
        rep.result(Json{{"count", subs.size()}, {"subgroups", arr}});
        hum << subs.size() << " subgroup(s)\n";
      } else {
        FiniteGroupTable h(detail::parse_u64_list(oargs.h));
        FiniteGroupTable g(detail::parse_u64_list(oargs.g));
        bool ans = oracle_embeds(h, g, ctx.max_order);
        rep.inputs(Json{{"h", h.factors()}, {"g", g.factors()}});
        rep.result(Json{{"answer", ans ? "yes" : "no"}});
        hum << (ans ? "yes" : "no") << "\n";
      }
      rep.human(hum.str());
    }
    rep.emit(out, ctx.json);
    return 0;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace typact::cli
