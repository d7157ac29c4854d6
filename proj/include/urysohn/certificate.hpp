#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "urysohn/rational.hpp"

namespace urysohn {

// One exact inequality. op is one of "<=", "<", "=".
struct CheckRecord {
  std::string name;
  Rat lhs;
  std::string op;
  Rat rhs;
  bool ok = false;
};

inline bool evaluate(const Rat& lhs, const std::string& op, const Rat& rhs) {
  if (op == "<=") return lhs <= rhs;
  if (op == "<") return lhs < rhs;
  if (op == "=") return lhs == rhs;
  throw ParseError("unknown comparison '" + op + "'");
}

inline CheckRecord make_check(std::string name, Rat lhs, std::string op, Rat rhs) {
  bool ok = evaluate(lhs, op, rhs);
  return {std::move(name), std::move(lhs), std::move(op), std::move(rhs), ok};
}

inline bool all_ok(const std::vector<CheckRecord>& checks) {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

inline std::string emit_certificate(const std::string& title, const std::vector<CheckRecord>& checks) {
  std::string body = "CERTIFICATE " + title + "\n";
  std::size_t ok = 0;
  for (const auto& c : checks) {
    body += "check " + c.name + " " + c.lhs.str() + " " + c.op + " " + c.rhs.str() + (c.ok ? " OK" : " FAIL") + "\n";
    ok += c.ok;
  }
  body += "summary " + std::to_string(checks.size()) + " " + std::to_string(ok) + " " +
          std::to_string(checks.size() - ok) + "\n";
  return body + "digest " + sha256_hex(body) + "\n";
}

struct VerifyResult {
  bool consistent = false;  // every verdict, the summary and the digest recompute
  bool all_ok = false;
  std::size_t checks = 0;
  std::string error;
};

// Recomputes everything from the text alone.
inline VerifyResult verify_certificate(const std::string& text) {
  VerifyResult r;
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) {
      r.error = "missing final newline";
      return r;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.size() < 3 || lines.front().rfind("CERTIFICATE ", 0) != 0) {
    r.error = "missing header";
    return r;
  }
  std::size_t ok = 0, fail = 0;
  std::string body = lines.front() + "\n";
  std::size_t i = 1;
  try {
    for (; i < lines.size() && lines[i].rfind("check ", 0) == 0; ++i) {
      std::istringstream in(lines[i]);
      std::string kw, name, lhs, op, rhs, verdict, extra;
      in >> kw >> name >> lhs >> op >> rhs >> verdict;
      if (!in || (in >> extra) || (verdict != "OK" && verdict != "FAIL")) {
        r.error = "malformed check at line " + std::to_string(i + 1);
        return r;
      }
      Rat l = Rat::parse(lhs, true), h = Rat::parse(rhs, true);
      if (l.str() != lhs || h.str() != rhs) {
        r.error = "non-canonical rational at line " + std::to_string(i + 1);
        return r;
      }
      bool v = evaluate(l, op, h);
      if (v != (verdict == "OK")) {
        r.error = "verdict does not recompute at line " + std::to_string(i + 1);
        return r;
      }
      (v ? ok : fail)++;
      body += lines[i] + "\n";
    }
  } catch (const Error& e) {
    r.error = std::string("line ") + std::to_string(i + 1) + ": " + e.what();
    return r;
  }
  if (i + 2 != lines.size()) {
    r.error = "expected summary and digest after the checks";
    return r;
  }
  std::string summary = "summary " + std::to_string(ok + fail) + " " + std::to_string(ok) + " " + std::to_string(fail);
  if (lines[i] != summary) {
    r.error = "summary does not recompute";
    return r;
  }
  body += lines[i] + "\n";
  if (lines[i + 1] != "digest " + sha256_hex(body)) {
    r.error = "digest mismatch";
    return r;
  }
  r.consistent = true;
  r.all_ok = fail == 0;
  r.checks = ok + fail;
  return r;
}

}  // namespace urysohn
