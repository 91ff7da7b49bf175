// Acceptance suite: one pass/fail line per criterion. Exit code is the number
// of failed criteria (0 when all pass). Criteria that expose defects in the
// printed formulas fail honestly and say exactly where.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dedekind/audit.hpp"
#include "dedekind/report.hpp"

using namespace dedekind;
using audit::CheckStatus;

namespace {

struct Criterion {
  int number;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Criterion> g_results;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void record(int number, bool pass, const std::string& detail, double seconds) {
  g_results.push_back({number, pass, detail, seconds});
  std::ostringstream line;
  line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << detail << " ("
       << seconds << " s)";
  std::cout << line.str() << std::endl;
}

Real decimal(const char* s, long prec = 96) {
  Real r(prec);
  mpfr_set_str(const_cast<mpfr_ptr>(r.raw()), s, 10, MPFR_RNDN);
  return r;
}

bool rel_within(const Real& a, const Real& b, const Real& tol) {
  Real scale = b.abs();
  if (scale < Real::of(1L, 64)) scale = Real::of(1L, scale.precision());
  return (a - b).abs() <= tol * scale;
}

Rational sawtooth(long long num, long long den) {
  if (num % den == 0) return Rational(0);
  long long r = num % den;
  if (r < 0) r += den;
  return Rational(r, den) - Rational(1, 2);
}

// --- criterion 1: classical reciprocity, exact, h < k <= 40 ----------------
void criterion1() {
  Timer t;
  long checked = 0, failed = 0;
  for (long long k = 2; k <= 40; ++k)
    for (long long h = 1; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      ++checked;
      if (!audit::reciprocity_check(h, k).passed()) ++failed;
    }
  const double secs = t.seconds();
  std::ostringstream d;
  d << "reciprocity exact on " << checked << " coprime pairs, " << failed << " failures";
  record(1, failed == 0 && secs < 5.0, d.str(), secs);
}

// --- criterion 2: sawtooth equivalence, exact, k <= 60 ---------------------
void criterion2() {
  Timer t;
  long checked = 0, failed = 0;
  for (long long k = 1; k <= 60; ++k)
    for (long long h = 1; h <= k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      Rational oracle(0);
      for (long long j = 1; j < k; ++j) oracle += sawtooth(j, k) * sawtooth(h * j, k);
      ++checked;
      if (dedekind_sum(h, 1, 1, k) != oracle) ++failed;
    }
  std::ostringstream d;
  d << "sawtooth oracle agreement on " << checked << " pairs, " << failed << " failures";
  record(2, failed == 0, d.str(), t.seconds());
}

// --- criterion 3: Prop 1.1 + Lemma 2.2, exact, zero tolerance --------------
void criterion3() {
  Timer t;
  long red_checked = 0, red_failed = 0;
  std::map<std::string, std::pair<long, long>> vanish;  // variant -> (checked, failed)
  for (long long q = 2; q <= 36; ++q) {
    for (long long h : reduced_residues(q)) {
      for (int m = 1; m <= 5; ++m) {
        for (auto branch : {audit::ReductionBranch::S1, audit::ReductionBranch::S3,
                            audit::ReductionBranch::S5Prop}) {
          const auto r = audit::check_hardy_reduction(branch, h, branch == audit::ReductionBranch::S3 ? 1 : m,
                                                      branch == audit::ReductionBranch::S3 ? m : 1, q);
          if (r.status == CheckStatus::HypothesisNotSatisfied) continue;
          ++red_checked;
          if (!r.passed()) ++red_failed;
        }
        for (int n = 1; n <= 5; ++n) {
          const auto r = audit::check_hardy_reduction(audit::ReductionBranch::S2, h, m, n, q);
          if (r.status != CheckStatus::HypothesisNotSatisfied) {
            ++red_checked;
            if (!r.passed()) ++red_failed;
          }
          const auto v2 = audit::check_hardy_vanishing(HardyVariant::S2, h, m, n, q);
          if (v2.status != CheckStatus::HypothesisNotSatisfied) {
            ++vanish["s2"].first;
            if (!v2.passed()) ++vanish["s2"].second;
          }
        }
        for (auto v : {HardyVariant::S1, HardyVariant::S3, HardyVariant::S5}) {
          const auto r = audit::check_hardy_vanishing(v, h, v == HardyVariant::S3 ? 0 : m,
                                                      v == HardyVariant::S3 ? m : 0, q);
          if (r.status == CheckStatus::HypothesisNotSatisfied) continue;
          ++vanish[hardy_name(v)].first;
          if (!r.passed()) ++vanish[hardy_name(v)].second;
        }
      }
    }
  }
  long l22_checked = 0, l22_failed = 0;
  for (long long q = 3; q <= 45; q += 2) {
    for (long long h : reduced_residues(q)) {
      if (h % 2 == 0) continue;
      for (int m : {1, 3}) {
        const auto a = audit::check_hardy_reduction(audit::ReductionBranch::S5Lemma, h, m, 1, q);
        const auto b = audit::check_lemma22_eq2(h, m, q);
        l22_checked += 2;
        if (!a.passed()) ++l22_failed;
        if (!b.passed()) ++l22_failed;
      }
    }
  }
  std::ostringstream d;
  d << "reductions " << red_checked - red_failed << "/" << red_checked << "; vanishing";
  bool vanish_ok = true;
  for (const auto& [name, cf] : vanish) {
    d << " " << name << " " << cf.first - cf.second << "/" << cf.first;
    vanish_ok = vanish_ok && cf.second == 0;
  }
  d << "; Lemma2.2+eq2 " << l22_checked - l22_failed << "/" << l22_checked;
  const bool pass = red_failed == 0 && vanish_ok && l22_failed == 0;
  if (!pass)
    d << " -- the s2/s3 vanishing claims are false as printed (dsum verify prop11 lists every case)";
  record(3, pass, d.str(), t.seconds());
}

// Shared state for criteria 4-7 so criterion 9 can re-run them at 384 bits.
struct NumericOutcome {
  bool c4 = false, c5 = false, c6 = false, c7 = false;
  std::string c4_detail, c5_detail, c6_detail, c7_detail;
  std::map<std::string, Real> numerics;                       // instance key -> value
  std::map<std::string, std::vector<std::string>> verdicts;   // per theorem instance
};

// --- criterion 4: Lemma 2.1 to 1e-25 ---------------------------------------
void criterion4(NumericOutcome& out, long bits) {
  const PrecisionContext ctx(bits, decimal("1e-25"));
  long checked = 0, failed = 0;
  for (long long q : {3, 5, 9, 12}) {
    for (long long h : reduced_residues(q)) {
      for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {3, 3}}) {
        const auto r = audit::check_dedekind_lfunction(h, m, n, q, ctx);
        ++checked;
        if (!r.passed()) ++failed;
      }
    }
  }
  out.c4 = failed == 0;
  std::ostringstream d;
  d << "Lemma 2.1 exact-vs-L-series " << checked - failed << "/" << checked
    << " at rel 1e-25, bits=" << bits;
  out.c4_detail = d.str();
}

// --- criterion 5: Lemmas 2.3/2.4 + magnitude -------------------------------
void criterion5(NumericOutcome& out, long bits) {
  const PrecisionContext ctx25(bits, decimal("1e-25"));
  const Real tol20 = decimal("1e-20");
  long checked = 0, failed = 0, mags = 0, mag_failed = 0;
  for (long long q : {9, 16, 25, 27, 36}) {
    for (const auto& r : audit::check_lemma_23_24(q, ctx25)) {
      if (r.id == "Lemma2.3/magnitude") continue;  // re-checked below at 1e-20
      ++checked;
      if (!r.passed()) ++failed;
    }
    auto group = shared_group(q);
    for (const auto& chi : group->all_characters()) {
      if (chi.is_principal() || !chi.is_primitive()) continue;
      const Real mag = twisted_kloosterman(chi, ctx25).abs();
      ++mags;
      out.numerics["tau2mag|" + std::to_string(q) + "|" + std::to_string(chi.index())] = mag;
      if (!rel_within(mag, ctx25.of(q), tol20)) ++mag_failed;
    }
  }
  out.c5 = failed == 0 && mag_failed == 0;
  std::ostringstream d;
  d << "Lemma 2.3/2.4 " << checked - failed << "/" << checked << " at 1e-25; |tau^2|=q " << mags
    << " primitive characters, " << mag_failed << " failures at 1e-20, bits=" << bits;
  out.c5_detail = d.str();
}

// --- criterion 6: Lemmas 2.5-2.8 closed vs brute ---------------------------
void criterion6(NumericOutcome& out, long bits) {
  const PrecisionContext ctx(bits, decimal("1e-25"));
  long checked = 0, failed = 0;
  std::vector<std::string> failures;
  auto run = [&](int lemma, long long q, int m, int n, bool assert_equal) {
    const auto r = audit::check_lsum_lemma(lemma, q, m, n, ctx);
    const std::string key = "L" + std::to_string(lemma) + "|" + std::to_string(q) + "|" +
                            std::to_string(m) + "|" + std::to_string(n);
    // store the brute value for precision-robustness comparison
    out.numerics[key] = decimal(r.lhs.substr(1, r.lhs.find(',') - 1).c_str(), bits);
    if (!assert_equal) return;  // evaluated and recorded only (Lemma 2.7 even q)
    ++checked;
    if (!r.passed()) {
      ++failed;
      if (failures.size() < 4) failures.push_back(key);
    }
  };
  for (long long q : {3, 4, 5, 8, 9, 12})
    for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {3, 1}, {3, 3}}) run(5, q, m, n, true);
  for (long long q : {4, 8, 9, 16, 25, 27, 36})
    for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {3, 1}, {3, 3}}) run(6, q, m, n, true);
  for (long long q : {9, 25, 27}) run(7, q, 1, 1, true);
  for (long long q : {4, 8}) run(7, q, 1, 1, false);  // recorded, not asserted (open question)
  for (long long q : {9, 25, 27, 49})
    for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {3, 3}}) run(8, q, m, n, true);

  // hand-checkable anchor: sum over odd chi mod 3 of |L(1,chi)|^2 = pi^2/27
  const Complex anchor = brute_LL_sum(3, 1, 1, nullptr, false, ctx);
  const Real target = ctx.pi() * ctx.pi() * Rational(1, 27);
  const bool anchor_ok = rel_within(anchor.re, target, decimal("1e-25")) &&
                         anchor.im.abs() < decimal("1e-25");
  out.c6 = failed == 0 && anchor_ok;
  std::ostringstream d;
  d << "Lemmas 2.5-2.8 closed-vs-brute " << checked - failed << "/" << checked
    << " at rel 1e-25 (anchor pi^2/27 " << (anchor_ok ? "ok" : "FAILED") << "), bits=" << bits;
  if (failed != 0) {
    d << " -- failing:";
    for (const auto& f : failures) d << " " << f;
    if (failed > static_cast<long>(failures.size())) d << " ...";
    d << " (Lemma 2.8 is sign-inconsistent with its own proof; see findings)";
  }
  out.c6_detail = d.str();
}

// --- criterion 7: theorem audits --------------------------------------------
void criterion7(NumericOutcome& out, long bits) {
  const Real tol25 = decimal("1e-25");
  const Real tol20 = decimal("1e-20");
  long instances = 0, imag_failed = 0, pipeline_failed = 0;
  bool t1_distinguished = false;
  std::map<int, std::set<std::string>> subsets;
  std::map<int, long> counts;
  std::vector<std::string> inconsistent;

  for (int tid = 1; tid <= 5; ++tid) {
    for (long long q : audit::admissible_moduli(tid)) {
      const PrecisionContext ctx(std::max<long>(bits, PrecisionContext::for_modulus(q).bits()));
      for (auto [m, n] : audit::admissible_mn(tid)) {
        ++instances;
        ++counts[tid];
        const std::string inst = "T" + std::to_string(tid) + "|" + std::to_string(q) + "|" +
                                 std::to_string(m) + "|" + std::to_string(n);
        const auto lhs = audit::theorem_lhs(tid, q, m, n, ctx);
        out.numerics["lhs|" + inst] = lhs.value;
        if (!(lhs.imag_residue < tol25)) ++imag_failed;
        const Complex pipe = audit::theorem_pipeline(tid, q, m, n, ctx);
        if (!rel_within(lhs.value, pipe.re, tol20) || !(pipe.im.abs() < tol20)) ++pipeline_failed;
        // verdict at the audit tolerance 2^{-bits/2}
        std::vector<std::string> verdict;
        for (auto form : {audit::RhsForm::Statement, audit::RhsForm::Proof}) {
          const Real cand = ctx.of(audit::theorem_rhs(tid, form, q, m, n));
          Real scale = cand.abs();
          if (scale < ctx.of(1)) scale = ctx.of(1);
          if ((lhs.value - cand).abs() <= ctx.tol() * scale)
            verdict.emplace_back(audit::form_name(form));
        }
        std::string subset = "{";
        for (size_t i = 0; i < verdict.size(); ++i) subset += (i ? "," : "") + verdict[i];
        subset += "}";
        subsets[tid].insert(subset);
        out.verdicts[inst] = verdict;
      }
    }
  }
  for (const auto& [tid, s] : subsets)
    if (s.size() != 1) {
      std::string note = "T" + std::to_string(tid) + ":";
      for (const auto& x : s) note += " " + x;
      inconsistent.push_back(note);
    }

  // printed T1 statement and proof forms are numerically distinct at (4,1,1)
  const Rational st = audit::theorem_rhs(1, audit::RhsForm::Statement, 4, 1, 1);
  const Rational pf = audit::theorem_rhs(1, audit::RhsForm::Proof, 4, 1, 1);
  t1_distinguished = st != pf;

  out.c7 = imag_failed == 0 && pipeline_failed == 0 && inconsistent.empty() && t1_distinguished;
  std::ostringstream d;
  d << "theorem audits over " << instances << " instances: imag<1e-25 "
    << instances - imag_failed << "/" << instances << "; pipeline@1e-20 "
    << instances - pipeline_failed << "/" << instances << "; T1 statement!=proof at (4,1,1) "
    << (t1_distinguished ? "ok" : "FAILED") << "; verdict consistency ";
  if (inconsistent.empty()) {
    d << "ok (";
    for (int tid = 1; tid <= 5; ++tid) d << (tid > 1 ? " " : "") << "T" << tid << "=" << *subsets[tid].begin();
    d << ")";
  } else {
    d << "VIOLATED:";
    for (const auto& s : inconsistent) d << " " << s;
    d << " -- Theorem 3's proof form matches exactly (=3/8) at the single instance (q=4,m=1,n=3)";
  }
  out.c7_detail = d.str();
}

// --- criterion 8: scan determinism ------------------------------------------
void criterion8() {
  Timer t;
  const char* bin = std::getenv("DSUM_BIN");
  if (bin == nullptr) {
    record(8, false, "DSUM_BIN not set; cannot run the scan command", t.seconds());
    return;
  }
  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(bin) + " scan --q-max 80 --square-full-only --out " + out +
                            " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  const int rc1 = run("acceptance_scan1.json");
  const int rc2 = run("acceptance_scan2.json");
  auto slurp = [](const char* p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp("acceptance_scan1.json"), b = slurp("acceptance_scan2.json");
  const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  std::ostringstream d;
  d << "two scan --q-max 80 --square-full-only runs byte-identical: " << (ok ? "yes" : "NO")
    << " (" << a.size() << " bytes)";
  record(8, ok, d.str(), t.seconds());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();

  NumericOutcome base;
  {
    Timer t;
    criterion4(base, 192);
    const double secs = t.seconds();
    record(4, base.c4 && secs < 120.0, base.c4_detail, secs);
  }
  {
    Timer t;
    criterion5(base, 192);
    record(5, base.c5, base.c5_detail, t.seconds());
  }
  {
    Timer t;
    criterion6(base, 192);
    record(6, base.c6, base.c6_detail, t.seconds());
  }
  {
    Timer t;
    criterion7(base, 192);
    const double secs = t.seconds();
    record(7, base.c7 && secs < 300.0, base.c7_detail, secs);
  }
  criterion8();

  {
    Timer t;
    NumericOutcome hi;
    criterion4(hi, 384);
    criterion5(hi, 384);
    criterion6(hi, 384);
    criterion7(hi, 384);
    const bool outcomes_same = base.c4 == hi.c4 && base.c5 == hi.c5 && base.c6 == hi.c6 &&
                               base.c7 == hi.c7 && base.verdicts == hi.verdicts;
    long drifted = 0;
    const Real tol = decimal("1e-25");
    for (const auto& [key, value] : base.numerics) {
      auto it = hi.numerics.find(key);
      if (it == hi.numerics.end() || !rel_within(value, it->second, tol)) ++drifted;
    }
    std::ostringstream d;
    d << "precision robustness at 384 bits: outcomes " << (outcomes_same ? "unchanged" : "CHANGED")
      << ", " << drifted << " of " << base.numerics.size() << " reported numerics drifted > 1e-25 rel";
    record(9, outcomes_same && drifted == 0, d.str(), t.seconds());
  }

  int failed = 0;
  for (const auto& c : g_results)
    if (!c.pass) ++failed;
  std::cout << "acceptance: " << g_results.size() - failed << "/" << g_results.size()
            << " criteria passed" << std::endl;
  return failed;
}
