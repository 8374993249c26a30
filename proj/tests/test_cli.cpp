#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "typact/cli.hpp"

using namespace typact;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
  Json report;  // parsed when --json was used and exit code is 0
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  CliRun r{code, out.str(), err.str(), {}};
  bool json = std::find(args.begin(), args.end(), "--json") != args.end();
  if (json && code == 0) r.report = Json::parse(r.out);
  return r;
}

std::filesystem::path write_temp(const std::string& name, const Json& content) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream f(p);
  f << content.dump();
  return p;
}

// Minimal structural validator: type / required / properties /
// additionalProperties / enum / items.
bool validates(const Json& schema, const Json& value) {
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    if (t == "object" && !value.is_object()) return false;
    if (t == "array" && !value.is_array()) return false;
    if (t == "string" && !value.is_string()) return false;
    if (t == "number" && !value.is_number()) return false;
    if (t == "integer" && !value.is_number_integer()) return false;
    if (t == "boolean" && !value.is_boolean()) return false;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& v : schema["enum"])
      if (v == value) hit = true;
    if (!hit) return false;
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>())) return false;
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !validates(sub, value.at(key))) return false;
    if (schema.value("additionalProperties", Json(true)) == Json(false))
      for (const auto& [key, v] : value.items())
        if (!schema["properties"].contains(key)) return false;
  }
  if (schema.contains("items") && value.is_array())
    for (const auto& v : value)
      if (!validates(schema["items"], v)) return false;
  return true;
}

Json report_schema() {
  std::ifstream f(std::string(TYPACT_SOURCE_DIR) + "/schemas/report.schema.json");
  REQUIRE(f.good());
  Json s;
  f >> s;
  return s;
}

Json sample_action() {
  return Json{{"q", 4},
              {"generators", Json::array({Json{{"order", "inf"}, {"perm", {2, 3, 4, 1}}}})},
              {"marked_block", 1}};
}

}  // namespace

TEST_CASE("classify commands and exit codes") {
  CliRun r = run_cli({"classify", "extend-free", "(Z/2)^inf", "(Z/2)^inf + Z/3", "--json"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["answer"] == "no");
  CHECK(r.report["result"]["rule"] == "bounded-mbar-differ");
  CHECK(r.report["inputs"]["h"] == "(Z/2)^inf");
  CHECK(r.report["inputs"]["g"] == "Z/3 + (Z/2)^inf");  // canonical: descending primes

  CliRun mono = run_cli({"classify", "monothetic", "T(2)", "--json"});
  CHECK(mono.code == 0);
  CHECK(mono.report["result"]["answer"] == "yes");

  CliRun any = run_cli({"classify", "extend-any", "(Z/2)^inf", "(Z/2)^inf + Z/3", "--json"});
  CHECK(any.code == 0);
  CHECK(any.report["result"]["answer"] == "yes");
  CHECK(any.report["result"]["witness"] == "(Z/2)^inf");

  CHECK(run_cli({"classify", "embeds", "Q", "Z"}).code == 1);           // parse error
  CHECK(run_cli({"classify", "extend-free", "Z", "Z/2"}).code == 2);    // not a subgroup
  CHECK(run_cli({"classify"}).code == 1);                               // usage
  CHECK(run_cli({"oracle", "subgroups", "512"}).code == 3);             // budget
}

TEST_CASE("human output is readable text") {
  CliRun r = run_cli({"classify", "extend-free", "(Z/2)^inf", "(Z/2)^inf + Z/3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("no") != std::string::npos);
  CHECK(r.out.find("bounded-mbar-differ") != std::string::npos);
}

TEST_CASE("dual commands") {
  CliRun sp = run_cli({"dual", "spectral", "6", "2", "3", "--json"});
  CHECK(sp.code == 0);
  CHECK(sp.report["result"]["lhs_sum_is_whole"] == true);
  CHECK(sp.report["result"]["rhs_annihilators_meet_trivially"] == true);
  CHECK(sp.report["result"]["equal"] == true);

  CliRun ann = run_cli({"dual", "ann", "4", "2", "--json"});
  CHECK(ann.code == 0);
  CHECK(ann.report["result"]["annihilator"]["order"] == 2);

  CliRun spec = run_cli(
      {"dual", "spectrum", "4", "2", "1", "--json"});
  CHECK(spec.code == 0);
  CHECK(spec.report["result"]["order"] == 2);
  CHECK(spec.report["result"]["ergodic"] == true);
}

TEST_CASE("sim metric and extend") {
  auto rot = write_temp("typact_rot4.json", sample_action());
  Json id4{{"q", 4},
           {"generators", Json::array({Json{{"order", "inf"}, {"perm", {1, 2, 3, 4}}}})},
           {"marked_block", 1}};
  auto idp = write_temp("typact_id4.json", id4);

  CliRun m = run_cli({"sim", "metric", rot.string(), idp.string(), "--levels", "2,4", "--json"});
  CHECK(m.code == 0);
  CHECK(m.report["result"]["d"]["a"] == "-1/2");
  CHECK(m.report["result"]["d"]["b"] == "1");

  Json swap2{{"q", 2},
             {"generators", Json::array({Json{{"order", 2}, {"perm", {2, 1}}}})},
             {"marked_block", 1}};
  auto swp = write_temp("typact_swap2.json", swap2);
  CliRun e = run_cli({"sim", "extend", swp.string(), "--k", "2", "--base-elem", "1", "--json"});
  CHECK(e.code == 0);
  CHECK(e.report["result"]["extended"]["q"] == 4);
  CHECK(e.report["result"]["extended"]["generators"][1]["perm"] ==
        Json::array({2, 3, 4, 1}));
}

TEST_CASE("sim lnk enumeration and seeded sampling") {
  CliRun e = run_cli({"sim", "lnk", "--orders", "2", "--q", "2", "--json"});
  CHECK(e.code == 0);
  CHECK(e.report["result"]["count"] == 2);

  CliRun noseed = run_cli({"sim", "lnk", "--orders", "2", "--q", "4", "--sample", "2", "--json"});
  CHECK(noseed.code == 1);  // randomized + --json requires --seed

  CliRun s1 =
      run_cli({"sim", "lnk", "--orders", "2", "--q", "4", "--sample", "2", "--seed", "9",
               "--json"});
  CliRun s2 =
      run_cli({"sim", "lnk", "--orders", "2", "--q", "4", "--sample", "2", "--seed", "9",
               "--json"});
  CHECK(s1.code == 0);
  CHECK(s1.report["result"] == s2.report["result"]);
  CHECK(s1.report["seed"] == 9);

  // human mode auto-generates and echoes a seed
  CliRun human = run_cli({"sim", "lnk", "--orders", "2", "--q", "4", "--sample", "1"});
  CHECK(human.code == 0);
}

TEST_CASE("sim centralizer, witness, param, defect") {
  auto rot = write_temp("typact_rot4b.json", sample_action());
  CliRun c = run_cli({"sim", "centralizer", rot.string(), "--json"});
  CHECK(c.code == 0);
  CHECK(c.report["result"]["order"] == 4);

  CliRun w = run_cli({"sim", "witness", rot.string(), "--perm", "3,4,1,2", "--json"});
  CHECK(w.code == 0);
  CHECK(w.report["result"]["element"] == Json::array({2}));

  CliRun p = run_cli({"sim", "param", rot.string(), "--json"});
  CHECK(p.code == 0);
  CHECK(p.report["result"]["orders"] == Json::array({4}));

  Json rot8{{"q", 8},
            {"generators",
             Json::array({Json{{"order", "inf"}, {"perm", {2, 3, 4, 5, 6, 7, 8, 1}}}})},
            {"marked_block", 1}};
  auto tgt = write_temp("typact_rot8.json", rot8);
  CliRun d = run_cli({"sim", "defect", tgt.string(), rot.string()});
  CHECK(d.code == 0);
  CHECK(d.out.find("file,q,defect,window_terms") != std::string::npos);
  CHECK(d.out.find(",4,") != std::string::npos);
}

TEST_CASE("chacon subcommands") {
  Json inst{{"matrix", {{1, 0}, {0, 1}}},
            {"b", {"1/2", "1/2"}},
            {"H", {1, 2}},
            {"eta", "1/2"}};
  auto path = write_temp("typact_chacon.json", inst);
  CliRun sel = run_cli({"chacon", "select", path.string(), "--json"});
  CHECK(sel.code == 0);
  CHECK(sel.report["result"]["gamma"] == 1);
  CHECK(sel.report["result"]["pass"] == true);

  CliRun ver = run_cli({"chacon", "verify", path.string(), "--gamma", "2", "--json"});
  CHECK(ver.code == 0);
  CHECK(ver.report["result"]["score"] == "1/2");
}

TEST_CASE("oracle subcommands") {
  CliRun s = run_cli({"oracle", "subgroups", "4", "--json"});
  CHECK(s.code == 0);
  CHECK(s.report["result"]["count"] == 3);
  CliRun e = run_cli({"oracle", "embeds", "4", "2,2", "--json"});
  CHECK(e.code == 0);
  CHECK(e.report["result"]["answer"] == "no");
}

TEST_CASE("sim rge via instance file") {
  Json spec{{"levels", {2, 4}},
            {"base",
             Json{{"q", 2},
                  {"generators", Json::array({Json{{"order", 2}, {"perm", {2, 1}}}})},
                  {"marked_block", 1}}},
            {"relations", Json::array({Json{{"s", 2}, {"h", {1}}, {"k", Json::array()}}})},
            {"approx", {{1}}},
            {"gamma", "1000"}};
  spec["target"] = Json{
      {"q", 4},
      {"generators", Json::array({Json{{"order", 2}, {"perm", {3, 4, 1, 2}}},
                                  Json{{"order", 4}, {"perm", {2, 3, 4, 1}}}})},
      {"relations", Json::array({Json::array({1, -2})})},
      {"marked_block", 1}};
  auto path = write_temp("typact_rge.json", spec);
  CliRun r = run_cli({"sim", "rge", path.string(), "--json"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["bound_holds"] == true);
  CHECK(r.report["result"]["hypotheses"]["all"] == true);
  CHECK(r.report["result"]["extended"]["q"] == 4);
}

TEST_CASE("cli edge paths") {
  // relations flag on lnk enumeration
  CliRun rel = run_cli(
      {"sim", "lnk", "--orders", "2,2", "--relations", "1,-1", "--q", "2", "--json"});
  CHECK(rel.code == 0);
  CHECK(rel.report["result"]["count"] == 2);

  // d_n flag on the metric command
  auto rot = write_temp("typact_rot4d.json", sample_action());
  Json id4{{"q", 4},
           {"generators", Json::array({Json{{"order", "inf"}, {"perm", {1, 2, 3, 4}}}})},
           {"marked_block", 1}};
  auto idp = write_temp("typact_id4d.json", id4);
  CliRun dn = run_cli({"sim", "metric", rot.string(), idp.string(), "--levels", "2,4", "--dn",
                       "1", "--json"});
  CHECK(dn.code == 0);
  CHECK(dn.report["result"]["dn"] == "1/2");

  // annihilator of the trivial subgroup is the whole dual
  CliRun ann = run_cli({"dual", "ann", "4", "--json"});
  CHECK(ann.code == 0);
  CHECK(ann.report["result"]["annihilator"]["order"] == 4);

  // non-commuting witness request is a precondition violation
  CliRun bad = run_cli({"sim", "witness", rot.string(), "--perm", "2,1,3,4"});
  CHECK(bad.code == 2);

  // 1-indexed gamma
  Json inst{{"matrix", {{1}}}, {"b", {"1"}}, {"H", {1}}, {"eta", "1/2"}};
  auto ch = write_temp("typact_chacon0.json", inst);
  CHECK(run_cli({"chacon", "verify", ch.string(), "--gamma", "0"}).code == 1);
}

TEST_CASE("json reports validate against the shipped schema") {
  Json schema = report_schema();
  auto rot = write_temp("typact_rot4c.json", sample_action());
  Json id4{{"q", 4},
           {"generators", Json::array({Json{{"order", "inf"}, {"perm", {1, 2, 3, 4}}}})},
           {"marked_block", 1}};
  auto idp = write_temp("typact_id4c.json", id4);
  Json swap2{{"q", 2},
             {"generators", Json::array({Json{{"order", 2}, {"perm", {2, 1}}}})},
             {"marked_block", 1}};
  auto swp = write_temp("typact_swap2c.json", swap2);
  Json chinst{{"matrix", {{1, 0}, {0, 1}}}, {"b", {"1/2", "1/2"}}, {"H", {1, 2}},
              {"eta", "1/2"}};
  auto chp = write_temp("typact_chaconc.json", chinst);
  Json rge{{"levels", {2, 4}},
           {"base", swap2},
           {"relations", Json::array({Json{{"s", 2}, {"h", {1}}, {"k", Json::array()}}})},
           {"approx", {{1}}},
           {"gamma", "10"}};
  auto rgep = write_temp("typact_rgec.json", rge);
  Json swap2z{{"q", 2},
              {"generators", Json::array({Json{{"order", "inf"}, {"perm", {2, 1}}}})},
              {"marked_block", 1}};
  auto swpz = write_temp("typact_swap2z.json", swap2z);
  std::vector<std::vector<std::string>> golden = {
      {"classify", "extend-free", "(Z/2)^inf", "(Z/2)^inf + Z/3", "--json"},
      {"classify", "extend-any", "(Z/2)^inf", "(Z/4)^inf", "--json"},
      {"classify", "monothetic", "Z", "--json"},
      {"classify", "weak-iso", "(Z/2)^inf + (Z/4)^inf", "(Z/4)^inf", "--json"},
      {"classify", "embeds", "Z/2", "Z/4", "--json"},
      {"dual", "ann", "4", "2", "--json"},
      {"dual", "spectral", "6", "2", "3", "--json"},
      {"dual", "spectrum", "4", "2", "1", "--json"},
      {"sim", "centralizer", rot.string(), "--json"},
      {"sim", "param", rot.string(), "--json"},
      {"sim", "metric", rot.string(), idp.string(), "--levels", "2,4", "--json"},
      {"sim", "extend", swp.string(), "--k", "2", "--base-elem", "1", "--json"},
      {"sim", "lnk", "--orders", "2", "--q", "2", "--json"},
      {"sim", "lnk", "--orders", "2", "--q", "3", "--sample", "1", "--seed", "5", "--json"},
      {"sim", "probe", rot.string(), "--levels", "2,4", "--eps", "1/4", "--json"},
      {"sim", "defect", rot.string(), swpz.string(), "--json"},
      {"sim", "witness", rot.string(), "--perm", "3,4,1,2", "--json"},
      {"sim", "rge", rgep.string(), "--json"},
      {"chacon", "select", chp.string(), "--json"},
      {"chacon", "verify", chp.string(), "--gamma", "1", "--json"},
      {"oracle", "subgroups", "4,2", "--json"},
      {"oracle", "embeds", "2", "4", "--json"},
  };
  for (const auto& cmd : golden) {
    CliRun r = run_cli(cmd);
    INFO("command: " << cmd[0] << " " << cmd[1]);
    CHECK(r.code == 0);
    CHECK(validates(schema, r.report));
  }
}

TEST_CASE("round-trip of parsed expressions through reports") {
  for (const std::string expr :
       {"Z", "Z^inf + (Z/2)^inf + C(3^inf) + T(5)", "Z/6", "(Z/9)^3 + Z/2"}) {
    CliRun r = run_cli({"classify", "weak-iso", expr, expr, "--json"});
    REQUIRE(r.code == 0);
    std::string canon = r.report["inputs"]["h"];
    CHECK(parse_group(canon) == parse_group(expr));
    CHECK(r.report["result"]["answer"] == "yes");
  }
}
