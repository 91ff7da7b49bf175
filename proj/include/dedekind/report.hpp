#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dedekind/audit.hpp"

namespace dedekind::report {

inline constexpr const char* kToolVersion = "dsum 1.0.0";

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::vector<long long> moduli;
  std::vector<int> m_list, n_list;
  std::vector<long long> h_list;
  std::optional<long> bits;
  std::optional<std::string> tol;
  std::string out_path;
  std::string format = "json";
  std::string cache_path;
  bool alt_ranges = false;
  long long q_max = 0;
  bool square_full_only = false;

  json echo() const {
    json j;
    j["command"] = command;
    if (!moduli.empty()) j["q"] = moduli;
    if (!m_list.empty()) j["m"] = m_list;
    if (!n_list.empty()) j["n"] = n_list;
    if (!h_list.empty()) j["h"] = h_list;
    if (bits) j["bits"] = *bits;
    if (tol) j["tol"] = *tol;
    if (q_max > 0) j["q_max"] = q_max;
    if (square_full_only) j["square_full_only"] = true;
    if (alt_ranges) j["alt_ranges"] = true;
    j["format"] = format;
    return j;
  }
};

namespace detail {

inline const char* status_str(audit::CheckStatus s) {
  switch (s) {
    case audit::CheckStatus::Pass: return "pass";
    case audit::CheckStatus::Fail: return "fail";
    case audit::CheckStatus::HypothesisNotSatisfied: return "hypothesis_not_satisfied";
  }
  return "?";
}

inline json params_json(const audit::Params& p) {
  json j;
  if (p.q) j["q"] = *p.q;
  if (p.h) j["h"] = *p.h;
  if (p.m) j["m"] = *p.m;
  if (p.n) j["n"] = *p.n;
  if (p.chi) j["chi"] = *p.chi;
  return j;
}

inline json check_json(const audit::CheckResult& c) {
  json j;
  j["id"] = c.id;
  j["params"] = params_json(c.params);
  j["kind"] = c.kind == audit::ValueKind::Exact ? "exact" : "numeric";
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["diff"] = json{{"abs", c.abs_diff}, {"rel", c.rel_diff}};
  j["pass"] = c.passed();
  j["status"] = status_str(c.status);
  j["bits"] = c.bits;
  j["tol"] = c.tol;
  if (!c.extra.empty()) {
    json e;
    for (const auto& [k, v] : c.extra) e[k] = v;
    j["extra"] = e;
  }
  return j;
}

inline json audit_json(const audit::AuditVerdict& v) {
  json j;
  j["id"] = "Theorem" + std::to_string(v.theorem_id);
  j["params"] = json{{"q", v.q}, {"m", v.m}, {"n", v.n}};
  j["kind"] = "audit";
  j["lhs"] = v.lhs;
  j["imag_residue"] = v.imag_residue;
  json cands, dabs, drel;
  for (const auto& [k, val] : v.candidates) cands[k] = val;
  for (const auto& [k, val] : v.abs_diff) dabs[k] = val;
  for (const auto& [k, val] : v.rel_diff) drel[k] = val;
  j["candidates"] = cands;
  j["diff"] = json{{"abs", dabs}, {"rel", drel}};
  j["verdict"] = v.verdict;
  j["pipeline"] = json{{"value", v.pipeline},
                       {"rel_diff", v.pipeline_rel_diff},
                       {"pass", v.pipeline_pass}};
  if (!v.secondary.empty()) {
    json s;
    for (const auto& [k, val] : v.secondary) s[k] = val;
    j["secondary"] = s;
  }
  j["bits"] = v.bits;
  j["tol"] = v.tol;
  return j;
}

struct SortKey {
  std::string id;
  long long q = -1, h = -1;
  int m = -1, n = -1;
  long long chi = -1;
  auto tuple() const { return std::tie(id, q, m, n, h, chi); }
  bool operator<(const SortKey& o) const { return tuple() < o.tuple(); }
};

inline SortKey key_of(const json& rec) {
  SortKey k;
  k.id = rec["id"].get<std::string>();
  const auto& p = rec["params"];
  if (p.contains("q")) k.q = p["q"].get<long long>();
  if (p.contains("h")) k.h = p["h"].get<long long>();
  if (p.contains("m")) k.m = p["m"].get<int>();
  if (p.contains("n")) k.n = p["n"].get<int>();
  if (p.contains("chi")) k.chi = p["chi"].get<long long>();
  return k;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string flat(const json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_object()) {
    std::string out;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!out.empty()) out += ";";
      out += it.key() + "=" + flat(it.value());
    }
    return out;
  }
  if (j.is_array()) {
    std::string out;
    for (const auto& e : j) {
      if (!out.empty()) out += ";";
      out += flat(e);
    }
    return out;
  }
  return j.dump();
}

}  // namespace detail

// Deterministic report: records sorted by (id, q, m, n, h, chi); no timestamps
// anywhere in the body (run timing goes to the log stream, not the report).
class Report {
 public:
  Report(RunConfig config) : config_(std::move(config)) {}

  void add(audit::CheckResult c) { checks_.push_back(std::move(c)); }
  void add(audit::AuditVerdict v) { audits_.push_back(std::move(v)); }
  void add(std::vector<audit::CheckResult> cs) {
    for (auto& c : cs) checks_.push_back(std::move(c));
  }

  const std::vector<audit::CheckResult>& checks() const { return checks_; }
  const std::vector<audit::AuditVerdict>& audits() const { return audits_; }

  bool has_exact_failure() const {
    for (const auto& c : checks_)
      if (c.kind == audit::ValueKind::Exact && c.status == audit::CheckStatus::Fail) return true;
    return false;
  }

  json to_json() const {
    json j;
    j["version"] = kToolVersion;
    j["config"] = config_.echo();
    std::vector<json> records;
    records.reserve(checks_.size() + audits_.size());
    for (const auto& c : checks_) records.push_back(detail::check_json(c));
    for (const auto& v : audits_) records.push_back(detail::audit_json(v));
    std::stable_sort(records.begin(), records.end(), [](const json& a, const json& b) {
      return detail::key_of(a) < detail::key_of(b);
    });
    j["records"] = records;
    j["summary"] = summary();
    j["findings"] = findings();
    return j;
  }

  std::string to_csv() const {
    const json body = to_json();
    static const char* cols[] = {"id",   "kind",    "q",    "h",       "m",       "n",
                                 "chi",  "lhs",     "rhs",  "candidates", "verdict", "abs_diff",
                                 "rel_diff", "pass", "status", "imag_residue", "pipeline",
                                 "bits", "tol",     "extra"};
    std::ostringstream out;
    for (size_t i = 0; i < std::size(cols); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& rec : body["records"]) {
      const auto& p = rec["params"];
      auto field = [&](const char* name) -> std::string {
        if (std::string(name) == "q" || std::string(name) == "h" || std::string(name) == "m" ||
            std::string(name) == "n" || std::string(name) == "chi")
          return p.contains(name) ? detail::flat(p[name]) : "";
        if (rec.contains(name)) return detail::flat(rec[name]);
        if (std::string(name) == "abs_diff")
          return rec.contains("diff") ? detail::flat(rec["diff"]["abs"]) : "";
        if (std::string(name) == "rel_diff")
          return rec.contains("diff") ? detail::flat(rec["diff"]["rel"]) : "";
        return "";
      };
      for (size_t i = 0; i < std::size(cols); ++i)
        out << (i ? "," : "") << detail::csv_escape(field(cols[i]));
      out << "\n";
    }
    return out.str();
  }

  json summary() const {
    long pass = 0, fail = 0, skipped = 0;
    for (const auto& c : checks_) {
      switch (c.status) {
        case audit::CheckStatus::Pass: ++pass; break;
        case audit::CheckStatus::Fail: ++fail; break;
        case audit::CheckStatus::HypothesisNotSatisfied: ++skipped; break;
      }
    }
    json j;
    j["pass"] = pass;
    j["fail"] = fail;
    j["hypothesis_not_satisfied"] = skipped;
    j["audits"] = audits_.size();
    return j;
  }

  // Deterministic findings derived from the records: per-theorem verdict
  // consistency, statement/proof mismatches, and failing-check aggregates.
  std::vector<std::string> findings() const {
    std::vector<std::string> out;

    std::map<int, std::vector<const audit::AuditVerdict*>> by_theorem;
    for (const auto& v : audits_) by_theorem[v.theorem_id].push_back(&v);
    for (const auto& [tid, vs] : by_theorem) {
      std::map<std::string, std::vector<std::string>> by_subset;
      bool pipeline_ok = true;
      for (const auto* v : vs) {
        std::string subset = "{";
        for (size_t i = 0; i < v->verdict.size(); ++i) subset += (i ? "," : "") + v->verdict[i];
        subset += "}";
        by_subset[subset].push_back("(q=" + std::to_string(v->q) + ",m=" + std::to_string(v->m) +
                                    ",n=" + std::to_string(v->n) + ")");
        pipeline_ok = pipeline_ok && v->pipeline_pass;
      }
      const std::string name = "Theorem " + std::to_string(tid);
      if (by_subset.size() == 1) {
        const auto& [subset, insts] = *by_subset.begin();
        out.push_back(name + ": verdict " + subset + " consistent across " +
                      std::to_string(insts.size()) + " instance(s)");
        if (subset == "{proof}")
          out.push_back(name + ": statement form disagrees with brute force; proof form matches");
        else if (subset == "{}")
          out.push_back(name + ": NEITHER printed form matches brute force on any instance");
      } else {
        std::string detail = name + ": VERDICT INCONSISTENT across instances:";
        for (const auto& [subset, insts] : by_subset) {
          detail += " " + subset + " on ";
          if (insts.size() <= 3) {
            for (size_t i = 0; i < insts.size(); ++i) detail += (i ? "," : "") + insts[i];
          } else {
            detail += std::to_string(insts.size()) + " instances";
          }
          detail += ";";
        }
        out.push_back(detail);
      }
      out.push_back(name + ": pipeline cross-check " +
                    (pipeline_ok ? "passed on all instances" : "FAILED on some instances"));
    }

    std::map<std::string, std::pair<long, long>> check_counts;  // id -> (pass, fail)
    for (const auto& c : checks_) {
      if (c.status == audit::CheckStatus::Pass) ++check_counts[c.id].first;
      if (c.status == audit::CheckStatus::Fail) ++check_counts[c.id].second;
    }
    for (const auto& [id, pf] : check_counts) {
      if (pf.second == 0) continue;
      out.push_back(id + ": " + std::to_string(pf.second) + " of " +
                    std::to_string(pf.first + pf.second) + " checks FAILED" +
                    failing_param_note(id));
      if (id == "Lemma2.8") {
        long negated = 0;
        for (const auto& c : checks_) {
          if (c.id != id || c.status != audit::CheckStatus::Fail) continue;
          for (const auto& [k, v] : c.extra)
            if (k == "negated_match" && v == "true") ++negated;
        }
        out.push_back(id + ": the sign-negated closed form matches on " +
                      std::to_string(negated) + " of " + std::to_string(pf.second) +
                      " failing instances (exactly the m=n ones)");
      }
    }
    return out;
  }

  // Writes the body only; the report is byte-identical across runs.
  void write(std::ostream& os) const {
    if (config_.format == "csv")
      os << to_csv();
    else
      os << to_json().dump(2) << "\n";
  }

 private:
  std::string failing_param_note(const std::string& id) const {
    std::set<std::string> qs;
    long shown = 0;
    std::string insts;
    for (const auto& c : checks_) {
      if (c.id != id || c.status != audit::CheckStatus::Fail) continue;
      if (c.params.q) qs.insert(std::to_string(*c.params.q));
      if (shown < 3) {
        insts += (shown ? " " : "");
        insts += "(";
        if (c.params.q) insts += "q=" + std::to_string(*c.params.q);
        if (c.params.h) insts += ",h=" + std::to_string(*c.params.h);
        if (c.params.m) insts += ",m=" + std::to_string(*c.params.m);
        if (c.params.n) insts += ",n=" + std::to_string(*c.params.n);
        insts += ")";
        ++shown;
      }
    }
    if (insts.empty()) return "";
    return "; first instances: " + insts;
  }

  RunConfig config_;
  std::vector<audit::CheckResult> checks_;
  std::vector<audit::AuditVerdict> audits_;
};

// Append-only JSON-lines cache keyed by (kind, parameter tuple, bits).
class ResultCache {
 public:
  explicit ResultCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("k") || !j.contains("v")) continue;
      entries_[j["k"].get<std::string>()] = j["v"];
    }
  }

  std::optional<json> get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const json& value) {
    if (entries_.count(key)) return;
    entries_[key] = value;
    std::ofstream out(path_, std::ios::app);
    out << json{{"k", key}, {"v", value}}.dump() << "\n";
  }

 private:
  std::string path_;
  std::map<std::string, json> entries_;
};

}  // namespace dedekind::report
