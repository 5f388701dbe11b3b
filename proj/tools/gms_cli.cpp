#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "gms/acceptance.hpp"
#include "gms/constructions.hpp"
#include "gms/engine.hpp"
#include "gms/mt_norm.hpp"
#include "run_config.hpp"

using namespace gms;
using gms::cli::Format;
using gms::cli::RunConfig;
using json = nlohmann::json;

namespace {

enum Exit { ok = 0, assertion = 1, usage = 2, capacity = 3 };

struct Session {
  RunConfig cfg;
  std::string config_path;

  SigmaRegistry open_registry() const {
    auto mode = cfg.mode;
    if (cfg.registry && std::filesystem::exists(*cfg.registry)) {
      auto reg = SigmaRegistry::load(*cfg.registry);
      if (reg.mode() != mode) throw InvalidArgument("registry mode differs from the configured schedule mode");
      return reg;
    }
    return SigmaRegistry(mode);
  }

  void close_registry(const SigmaRegistry& reg) const {
    if (cfg.registry) reg.save(*cfg.registry);
  }

  KContext context() const {
    auto sched = cfg.schedule();
    auto reg = open_registry();
    std::vector<SpecialSequence> models;
    for (const auto& spec : cfg.models) models.push_back(build_j_special(spec, reg, sched));
    close_registry(reg);
    return generate_K(cfg.caps, sched, std::move(models), std::move(reg));
  }
};

void emit(const Session& s, const json& j) {
  if (s.cfg.format == Format::json) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

json special_json(const SpecialSequence& seq, const SpecialReport& rep) {
  json j;
  j["j"] = seq.j;
  j["kind"] = seq.kind == SpecialSequence::Kind::j_special ? "j-special" : "lambda-special";
  std::vector<std::string> members;
  for (const auto& f : seq.members) members.push_back(to_string(f));
  j["members"] = members;
  j["weightIndices"] = seq.weight_indices;
  j["ks"] = seq.k_list;
  auto certs = json::array();
  for (const auto& c : seq.member_certs) certs.push_back(to_json(c));
  j["certificates"] = certs;
  j["ok"] = rep.ok;
  j["violations"] = rep.violations;
  return j;
}

json closure_json(const ClosureReport& r) {
  return {{"ok", r.ok},
          {"checked", r.checked},
          {"structural", r.structural},
          {"violations", r.violation_count},
          {"examples", r.violations},
          {"caveats", r.caveats}};
}

int cmd_mt_norm(const Session& s, const std::string& vec) {
  auto x = parse_vector(vec);
  auto sched = s.cfg.schedule();
  auto r = mt_norm_exact(x, sched);
  json j;
  j["norm"] = to_string(r.value);
  j["exact"] = r.exact;
  j["effectiveJ"] = r.effective_j;
  if (r.certificate) j["certificate"] = serialize(*r.certificate);
  emit(s, j);
  return ok;
}

int cmd_norm(const Session& s, const std::string& vec) {
  auto x = parse_vector(vec);
  auto ctx = s.context();
  emit(s, to_json(gm_norm_bracket(x, ctx, s.cfg.depth)));
  return ok;
}

int cmd_certify(const Session& s, const std::string& vec, const std::string& file) {
  auto x = parse_vector(vec);
  std::ifstream in(file);
  if (!in) throw ParseError("cannot read certificate " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto first = text.find_first_not_of(" \t\r\n");
  TreeCertificate cert = first != std::string::npos && text[first] == '{'
                             ? certificate_from_json(json::parse(text))
                             : parse_certificate(text);
  auto sched = s.cfg.schedule();
  auto rep = verify_certificate_structure(cert, sched);
  json j;
  if (!rep.ok) {
    std::string d = rep.diagnostics.front();
    auto a = d.find(": "), b = a == std::string::npos ? a : d.find(": ", a + 2);
    if (b != std::string::npos) d = d.substr(a + 2, b - a - 2) + " at node " + d.substr(0, a) + ": " + d.substr(b + 2);
    j["verdict"] = "invalid: " + d;
    j["diagnostics"] = rep.diagnostics;
    emit(s, j);
    return assertion;
  }
  Rational v = evaluate_certificate(cert, x, sched);
  j["verdict"] = "valid";
  j["value"] = to_string(v);
  j["lowerBound"] = to_string(abs(v));
  j["depth"] = depth(cert);
  emit(s, j);
  return ok;
}

int cmd_gen_k(const Session& s) {
  auto ctx = s.context();
  std::map<std::string, std::size_t> by_form;
  for (const auto& r : ctx.records()) ++by_form[to_string(r.formation)];
  auto k1 = check_K1(ctx), k2 = check_K2(ctx), k3 = check_K3(ctx);
  json j;
  j["schedule"] = ctx.schedule().describe();
  j["records"] = ctx.records().size();
  j["formations"] = by_form;
  j["generations"] = ctx.generations_built();
  j["saturated"] = ctx.saturated();
  j["K1"] = closure_json(k1);
  j["K2"] = closure_json(k2);
  j["K3"] = closure_json(k3);
  emit(s, j);
  return k1.ok && k2.ok && k3.ok && ctx.saturated() ? ok : assertion;
}

int cmd_isometry(const Session& s, const std::string& vec, int random) {
  auto ctx = s.context();
  std::vector<FinVector> xs;
  if (!vec.empty()) xs.push_back(parse_vector(vec));
  std::mt19937_64 rng(s.cfg.seed);
  Index hi = std::max<Index>(1, std::min<Index>(8, ctx.caps().window / 2));
  while (static_cast<int>(xs.size()) < random + (vec.empty() ? 0 : 1)) {
    FinVector x;
    for (Index i = 1; i <= hi; ++i)
      if (rng() % 3 != 0) x.set(i, make_rational(static_cast<long>(rng() % 19) - 9, 1 + rng() % 6));
    if (!x.is_zero()) xs.push_back(x);
  }
  if (xs.empty()) throw ParseError("isometry needs a vector or --random N");
  auto reports = json::array();
  std::size_t good = 0;
  for (const auto& x : xs) {
    auto r = isometry_check(x, ctx);
    good += r.ok;
    reports.push_back(to_json(r));
  }
  json j;
  j["checked"] = xs.size();
  j["ok"] = good;
  j["reports"] = reports;
  emit(s, j);
  return good == xs.size() ? ok : assertion;
}

int cmd_special(const Session& s, JSpecialSpec spec) {
  auto sched = s.cfg.schedule();
  auto reg = s.open_registry();
  auto seq = build_j_special(spec, reg, sched);
  auto rep = verify_special(seq, sched, reg);
  s.close_registry(reg);
  emit(s, special_json(seq, rep));
  return rep.ok ? ok : assertion;
}

int cmd_depseq(const Session& s, int jj) {
  auto sched = s.cfg.schedule();
  auto reg = s.open_registry();
  auto ds = build_dependent_sequence(jj, unit_blocks(), sched, reg);
  auto clauses = verify_dependent_sequence(ds, sched, reg);
  s.close_registry(reg);
  emit(s, to_json(ds, clauses));
  for (const auto& c : clauses)
    if (!c.ok && !c.caveat) return assertion;
  return ok;
}

int cmd_witness(const Session& s, int jj) {
  auto sched = s.cfg.schedule();
  auto reg = s.open_registry();
  auto ds = build_dependent_sequence(jj, unit_blocks(), sched, reg);
  auto w = complementation_witness(ds, sched);
  s.close_registry(reg);
  json j;
  j["complementation"] = to_json(w);
  j["strictSingularity"] = to_json(make_ss_witness(jj, unit_blocks(), sched));
  emit(s, j);
  return w.ok ? ok : assertion;
}

int cmd_registry(const Session& s, const std::string& action) {
  if (!s.cfg.registry) throw ParseError("registry commands need --registry or a registry config key");
  auto reg = s.open_registry();
  if (action == "export") {
    std::cout << reg.to_text();
    return ok;
  }
  json j;
  j["path"] = s.cfg.registry->string();
  j["mode"] = to_string(reg.mode());
  j["entries"] = reg.size();
  auto rows = json::array();
  for (const auto& [key, sigma] : reg.entries()) rows.push_back({{"sigma", sigma}, {"hash", fnv1a_hex(key)}});
  j["sigmas"] = rows;
  emit(s, j);
  return ok;
}

int cmd_selftest(const Session& s, const std::vector<int>& only) {
  AcceptanceConfig ac;
  ac.seed = s.cfg.seed;
  ac.registry = s.cfg.registry;
  std::vector<CriterionResult> results;
  if (only.empty()) {
    results = run_acceptance(ac);
  } else {
    for (int id : only) results.push_back(run_criterion(id, ac));
  }
  bool all = true;
  auto arr = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    arr.push_back(to_json(r));
    if (s.cfg.format == Format::text) std::cout << summary_line(r, true) << "\n";
  }
  if (s.cfg.format == Format::json) std::cout << json{{"pass", all}, {"criteria", arr}}.dump(2) << "\n";
  return all ? ok : assertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-rational norming sets, certified norms and witness constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  Session s;
  std::map<std::string, std::string> flags;
  app.add_option("--config", s.config_path, "key = value config file");
  for (const char* name : {"mode", "gen-cap", "supp-cap", "depth", "seed", "registry", "format"})
    app.add_option(std::string("--") + name, flags[name]);

  std::string vec, file, action;
  int random = 0, jj = 1;
  JSpecialSpec spec;
  std::vector<int> only;

  auto* mt = app.add_subcommand("mt-norm", "exact mixed Tsirelson norm with certificate");
  mt->add_option("vector", vec, "i:num/den,...")->required();
  auto* nm = app.add_subcommand("norm", "certified bracket of the norm over the generated K");
  nm->add_option("vector", vec)->required();
  auto* ce = app.add_subcommand("certify", "check a tree certificate and evaluate it");
  ce->add_option("vector", vec)->required();
  ce->add_option("certificate", file, "certificate file (JSON or serialized)")->required();
  auto* gk = app.add_subcommand("gen-k", "generate K and check closure");
  auto* iso = app.add_subcommand("isometry", "||Sx|| = ||x|| with transferred certificates");
  iso->add_option("vector", vec);
  iso->add_option("--random", random, "number of seeded random vectors")->check(CLI::NonNegativeNumber);
  auto* sp = app.add_subcommand("special", "build and verify a j-special sequence");
  sp->add_option("j", spec.j)->required()->check(CLI::PositiveNumber);
  sp->add_option("--pairs", spec.d)->check(CLI::PositiveNumber);
  sp->add_option("--seed-index", spec.seed_weight_index)->check(CLI::NonNegativeNumber);
  sp->add_option("--start", spec.start)->check(CLI::PositiveNumber);
  sp->add_option("--width", spec.width)->check(CLI::PositiveNumber);
  auto* dq = app.add_subcommand("depseq", "dependent sequence with clause report");
  dq->add_option("j", jj)->required()->check(CLI::PositiveNumber);
  auto* wi = app.add_subcommand("witness", "complementation and strict-singularity witnesses");
  wi->add_option("j", jj)->required()->check(CLI::PositiveNumber);
  auto* rg = app.add_subcommand("registry", "inspect or export the sigma registry");
  rg->add_option("action", action)->required()->check(CLI::IsMember({"inspect", "export"}));
  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  st->add_option("--only", only, "criterion ids")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (!s.config_path.empty()) cli::apply_config_file(s.cfg, s.config_path);
    for (const auto& [name, value] : flags)
      if (!value.empty()) cli::apply_setting(s.cfg, name, value);

    if (mt->parsed()) return cmd_mt_norm(s, vec);
    if (nm->parsed()) return cmd_norm(s, vec);
    if (ce->parsed()) return cmd_certify(s, vec, file);
    if (gk->parsed()) return cmd_gen_k(s);
    if (iso->parsed()) return cmd_isometry(s, vec, random);
    if (sp->parsed()) return cmd_special(s, spec);
    if (dq->parsed()) return cmd_depseq(s, jj);
    if (wi->parsed()) return cmd_witness(s, jj);
    if (rg->parsed()) return cmd_registry(s, action);
    if (st->parsed()) return cmd_selftest(s, only);
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return capacity;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return usage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return usage;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return assertion;
  }
  return usage;
}
