// dsum: compute generalized Dedekind/Hardy/Kloosterman sums and Dirichlet
// L-values, verify the supporting lemmas, and audit the five hybrid
// mean-value theorems against brute force. Reports are deterministic JSON
// or CSV bodies; run timing goes to stderr only.
//
// Exit codes: 0 success (mathematical findings included), 1 exact-check
// failure, 2 configuration error, 3 internal numeric error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dedekind/audit.hpp"
#include "dedekind/report.hpp"

namespace {

using namespace dedekind;
using report::json;
using report::Report;
using report::RunConfig;

struct CacheAdapter final : audit::TheoremLhsStore {
  explicit CacheAdapter(report::ResultCache& cache) : cache_(cache) {}

  std::optional<audit::TheoremLhs> load(int id, long long q, int m, int n, long bits) override {
    const auto v = cache_.get(key(id, q, m, n, bits));
    if (!v) return std::nullopt;
    return audit::TheoremLhs{Real::from_hex((*v)["value"].get<std::string>(), bits),
                             Real::from_hex((*v)["imag"].get<std::string>(), bits)};
  }
  void store(int id, long long q, int m, int n, long bits, const audit::TheoremLhs& v) override {
    cache_.put(key(id, q, m, n, bits), json{{"value", v.value.hex()}, {"imag", v.imag_residue.hex()}});
  }

 private:
  static std::string key(int id, long long q, int m, int n, long bits) {
    return "theorem_lhs|" + std::to_string(id) + "|" + std::to_string(q) + "|" +
           std::to_string(m) + "|" + std::to_string(n) + "|" + std::to_string(bits);
  }
  report::ResultCache& cache_;
};

PrecisionContext make_context(long long q, const RunConfig& cfg) {
  PrecisionContext base =
      cfg.bits ? PrecisionContext(*cfg.bits) : PrecisionContext::for_modulus(q);
  if (!cfg.tol) return base;
  Real tol(64);
  if (mpfr_set_str(const_cast<mpfr_ptr>(tol.raw()), cfg.tol->c_str(), 10, MPFR_RNDN) != 0)
    throw CLI::ValidationError("--tol", "not a decimal number: " + *cfg.tol);
  return {base.bits(), tol};
}

int emit(const Report& rep, const RunConfig& cfg) {
  if (cfg.out_path.empty()) {
    rep.write(std::cout);
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw CLI::ValidationError("--out", "cannot open " + cfg.out_path);
    rep.write(out);
    const auto s = rep.summary();
    std::cerr << "wrote " << cfg.out_path << ": " << s["pass"] << " pass, " << s["fail"]
              << " fail, " << s["hypothesis_not_satisfied"] << " skipped, " << s["audits"]
              << " audits\n";
  }
  return rep.has_exact_failure() ? 1 : 0;
}

void run_lemma_suite(Report& rep, const std::string& id, const RunConfig& cfg,
                     const std::vector<long long>& qs, const std::vector<int>& ms,
                     const std::vector<int>& ns) {
  for (long long q : qs) {
    const PrecisionContext ctx = make_context(q, cfg);
    if (id == "2.1") {
      for (long long h : cfg.h_list.empty() ? reduced_residues(q) : cfg.h_list)
        for (int m : ms)
          for (int n : ns) rep.add(audit::check_dedekind_lfunction(h, m, n, q, ctx));
    } else if (id == "2.2") {
      for (long long h : cfg.h_list.empty() ? reduced_residues(q) : cfg.h_list) {
        for (int m : ms) {
          rep.add(audit::check_hardy_reduction(audit::ReductionBranch::S5Lemma, h, m, 1, q));
          rep.add(audit::check_lemma22_eq2(h, m, q));
        }
      }
    } else if (id == "2.3" || id == "2.4") {
      for (auto& r : audit::check_lemma_23_24(q, ctx)) {
        if ((id == "2.3" && r.id == "Lemma2.3") || (id == "2.4" && r.id == "Lemma2.4"))
          rep.add(std::move(r));
      }
    } else {
      const int lemma = id[2] - '0';
      for (int m : ms)
        for (int n : ns) rep.add(audit::check_lsum_lemma(lemma, q, m, n, ctx));
    }
  }
}

void run_prop11_suite(Report& rep, long long q_max) {
  for (long long q = 2; q <= q_max; ++q) {
    for (long long h : reduced_residues(q)) {
      for (int m = 1; m <= 5; ++m) {
        rep.add(audit::check_hardy_reduction(audit::ReductionBranch::S1, h, m, 1, q));
        rep.add(audit::check_hardy_reduction(audit::ReductionBranch::S3, h, 1, m, q));
        rep.add(audit::check_hardy_reduction(audit::ReductionBranch::S5Prop, h, m, 1, q));
        rep.add(audit::check_hardy_vanishing(HardyVariant::S1, h, m, 0, q));
        rep.add(audit::check_hardy_vanishing(HardyVariant::S3, h, 0, m, q));
        rep.add(audit::check_hardy_vanishing(HardyVariant::S5, h, m, 0, q));
        for (int n = 1; n <= 5; ++n) {
          rep.add(audit::check_hardy_reduction(audit::ReductionBranch::S2, h, m, n, q));
          rep.add(audit::check_hardy_vanishing(HardyVariant::S2, h, m, n, q));
        }
      }
    }
  }
}

void run_scan(Report& rep, const RunConfig& cfg, audit::TheoremLhsStore* cache) {
  for (long long q = 3; q <= cfg.q_max; ++q) {
    const bool sf = is_square_full(q);
    if (cfg.square_full_only && !sf) continue;
    const PrecisionContext ctx = make_context(q, cfg);
    rep.add(audit::check_lemma_23_24(q, ctx));
    rep.add(audit::check_lsum_lemma(5, q, 1, 1, ctx));
    if (!sf) continue;
    rep.add(audit::check_lsum_lemma(6, q, 1, 1, ctx));
    rep.add(audit::check_lsum_lemma(7, q, 1, 1, ctx));
    if (q % 2 == 1) rep.add(audit::check_lsum_lemma(8, q, 1, 1, ctx));
    for (int tid = 1; tid <= 5; ++tid) {
      if (tid == 3 && q % 2 != 0) continue;
      if ((tid == 4 || tid == 5) && q % 2 == 0) continue;
      rep.add(audit::audit_theorem(tid, q, 1, 1, ctx, cfg.alt_ranges, cache));
    }
  }
}

json error_object(int code, const std::string& message) {
  return json{{"error", json{{"code", code}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Dedekind/Hardy/Kloosterman sums and identity audits"};
  app.require_subcommand(1);
  // --h is a domain option here, so help is long-form only; global options
  // (--bits, --out, ...) reach subcommands through fallthrough
  app.set_help_flag("--help", "print help");
  auto sub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->set_help_flag("--help", "print help");
    s->fallthrough();
    return s;
  };

  RunConfig cfg;
  long long arg_h = 0, arg_q = 0, arg_n_kloo = 0, arg_char_index = 0, arg_kmax = 40;
  int arg_m = 1, arg_n = 1;
  bool has_arg_n = false;
  std::string arg_variant, arg_lemma_id;
  int arg_theorem_id = 1;
  long arg_bits = 0;
  std::string arg_tol;

  app.add_option("--bits", arg_bits, "working precision override (binary digits)");
  app.add_option("--tol", arg_tol, "comparison tolerance override (decimal)");
  app.add_option("--out", cfg.out_path, "report output path (default: stdout)");
  app.add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--cache", cfg.cache_path, "append-only JSONL result cache");

  auto* compute = sub(&app, "compute", "evaluate a single quantity");
  compute->require_subcommand(1);
  auto* c_ded = sub(compute, "dedekind", "generalized Dedekind sum S(h,m,n,q)");
  c_ded->add_option("--h", arg_h)->required();
  c_ded->add_option("--m", arg_m)->required();
  c_ded->add_option("--n", arg_n)->required();
  c_ded->add_option("--q", arg_q)->required();
  auto* c_hardy = sub(compute, "hardy", "generalized Hardy sum");
  c_hardy->add_option("--variant", arg_variant)->required()->check(CLI::IsMember({"s1", "s2", "s3", "s5"}));
  c_hardy->add_option("--h", arg_h)->required();
  c_hardy->add_option("--m", arg_m)->required();
  c_hardy->add_option("--n", arg_n)->each([&](const std::string&) { has_arg_n = true; });
  c_hardy->add_option("--q", arg_q)->required();
  auto* c_kloo = sub(compute, "kloosterman", "Kloosterman sum K(n,q)");
  c_kloo->add_option("--n", arg_n_kloo)->required();
  c_kloo->add_option("--q", arg_q)->required();
  auto* c_lval = sub(compute, "lvalue", "Dirichlet L-value L(m, chi)");
  c_lval->add_option("--m", arg_m)->required();
  c_lval->add_option("--q", arg_q)->required();
  c_lval->add_option("--char-index", arg_char_index)->required();

  auto* verify = sub(&app, "verify", "run identity check suites");
  verify->require_subcommand(1);
  auto* v_lemma = sub(verify, "lemma", "check one lemma on a parameter grid");
  v_lemma->add_option("--id", arg_lemma_id)->required()
      ->check(CLI::IsMember({"2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8"}));
  v_lemma->add_option("--q", cfg.moduli)->required()->delimiter(',');
  v_lemma->add_option("--m", cfg.m_list)->delimiter(',');
  v_lemma->add_option("--n", cfg.n_list)->delimiter(',');
  v_lemma->add_option("--h", cfg.h_list)->delimiter(',');
  auto* v_prop = sub(verify, "prop11", "Proposition 1.1 reductions and vanishing");
  v_prop->add_option("--q-max", cfg.q_max)->required()->check(CLI::PositiveNumber);
  auto* v_rec = sub(verify, "reciprocity", "classical reciprocity formula");
  v_rec->add_option("--k-max", arg_kmax)->required()->check(CLI::PositiveNumber);

  auto* auditc = sub(&app, "audit", "audit theorems against brute force");
  auditc->require_subcommand(1);
  auto* a_thm = sub(auditc, "theorem", "brute LHS vs printed statement/proof forms");
  a_thm->add_option("--id", arg_theorem_id)->required()->check(CLI::Range(1, 5));
  a_thm->add_option("--q", cfg.moduli)->delimiter(',');
  a_thm->add_option("--m", cfg.m_list)->delimiter(',');
  a_thm->add_option("--n", cfg.n_list)->delimiter(',');
  a_thm->add_flag("--alt-ranges", cfg.alt_ranges, "include secondary interpretations");

  auto* scan = sub(&app, "scan", "run all applicable checks over a modulus range");
  scan->add_option("--q-max", cfg.q_max)->required()->check(CLI::PositiveNumber);
  scan->add_flag("--square-full-only", cfg.square_full_only);
  scan->add_flag("--alt-ranges", cfg.alt_ranges);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << error_object(2, e.what()).dump() << "\n";
    return 2;
  }

  if (arg_bits != 0) {
    if (arg_bits < 64) {
      std::cerr << error_object(2, "--bits must be >= 64").dump() << "\n";
      return 2;
    }
    cfg.bits = arg_bits;
  }
  if (!arg_tol.empty()) cfg.tol = arg_tol;

  std::optional<report::ResultCache> cache;
  std::optional<CacheAdapter> cache_adapter;
  if (!cfg.cache_path.empty()) {
    cache.emplace(cfg.cache_path);
    cache_adapter.emplace(*cache);
  }
  audit::TheoremLhsStore* store = cache_adapter ? &*cache_adapter : nullptr;

  try {
    if (c_ded->parsed()) {
      std::cout << dedekind_sum(arg_h, arg_m, arg_n, arg_q).str() << "\n";
      return 0;
    }
    if (c_hardy->parsed()) {
      HardyVariant v = arg_variant == "s1"   ? HardyVariant::S1
                       : arg_variant == "s2" ? HardyVariant::S2
                       : arg_variant == "s3" ? HardyVariant::S3
                                             : HardyVariant::S5;
      std::optional<int> n;
      if (has_arg_n) n = arg_n;
      std::cout << hardy_sum(v, arg_h, arg_m, n, arg_q).str() << "\n";
      return 0;
    }
    if (c_kloo->parsed()) {
      const PrecisionContext ctx = make_context(arg_q, cfg);
      const Real k = kloosterman(arg_n_kloo, arg_q, ctx);
      std::cout << audit::real_str(k, ctx.bits()) << "@" << ctx.bits() << "\n";
      return 0;
    }
    if (c_lval->parsed()) {
      const PrecisionContext ctx = make_context(arg_q, cfg);
      auto group = shared_group(arg_q);
      if (arg_char_index < 0 || arg_char_index >= group->order()) {
        std::cerr << error_object(2, "--char-index outside [0, phi(q))").dump() << "\n";
        return 2;
      }
      const Complex L = l_value(arg_m, group->character(arg_char_index), ctx);
      std::cout << audit::complex_str(L, ctx.bits()) << "@" << ctx.bits() << "\n";
      return 0;
    }

    if (v_lemma->parsed()) cfg.command = "verify lemma " + arg_lemma_id;
    if (v_prop->parsed()) cfg.command = "verify prop11";
    if (v_rec->parsed()) cfg.command = "verify reciprocity";
    if (a_thm->parsed()) cfg.command = "audit theorem " + std::to_string(arg_theorem_id);
    if (scan->parsed()) cfg.command = "scan";
    Report rep(cfg);

    if (v_lemma->parsed()) {
      const std::vector<int> default_m = arg_lemma_id == "2.2" ? std::vector<int>{1, 3}
                                                               : std::vector<int>{1};
      run_lemma_suite(rep, arg_lemma_id, cfg, cfg.moduli,
                      cfg.m_list.empty() ? default_m : cfg.m_list,
                      cfg.n_list.empty() ? std::vector<int>{1} : cfg.n_list);
    } else if (v_prop->parsed()) {
      run_prop11_suite(rep, cfg.q_max);
    } else if (v_rec->parsed()) {
      for (long long k = 2; k <= arg_kmax; ++k)
        for (long long h = 1; h < k; ++h)
          if (std::gcd(h, k) == 1) rep.add(audit::reciprocity_check(h, k));
    } else if (a_thm->parsed()) {
      const auto moduli = cfg.moduli.empty() ? audit::admissible_moduli(arg_theorem_id) : cfg.moduli;
      auto mns = audit::admissible_mn(arg_theorem_id);
      if (!cfg.m_list.empty() || !cfg.n_list.empty()) {
        mns.clear();
        const auto ms = cfg.m_list.empty() ? std::vector<int>{1} : cfg.m_list;
        const auto ns = cfg.n_list.empty() ? std::vector<int>{1} : cfg.n_list;
        for (int m : ms)
          for (int n : ns) mns.emplace_back(m, n);
      }
      for (long long q : moduli) {
        const PrecisionContext ctx = make_context(q, cfg);
        for (auto [m, n] : mns)
          rep.add(audit::audit_theorem(arg_theorem_id, q, m, n, ctx, cfg.alt_ranges, store));
      }
    } else if (scan->parsed()) {
      run_scan(rep, cfg, store);
    }
    return emit(rep, cfg);
  } catch (const NumericError& e) {
    std::cerr << error_object(3, e.what()).dump() << "\n";
    return 3;
  } catch (const CLI::Error& e) {
    std::cerr << error_object(2, e.what()).dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << error_object(2, e.what()).dump() << "\n";
    return 2;
  }
}
