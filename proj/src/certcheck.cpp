#include "qcbounds/certcheck.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qcbounds/combinatorics.hpp"

namespace qcb {

namespace {

int sgn(const Rational& r) { return mpq_sgn(r.get_mpq_t()); }
int sgn(const QuadExt& q) { return q.sign(); }

Rational pow2(int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return Rational(r);
}

}  // namespace

template <class T>
bool psd_exact(const DenseMatrix<T>& m) {
  if (!m.symmetric()) return false;
  const int s = m.rows();
  DenseMatrix<T> a = m;
  for (int k = 0; k < s; ++k) {
    const int d = sgn(a(k, k));
    if (d < 0) return false;
    if (d == 0) {
      for (int j = k + 1; j < s; ++j)
        if (sgn(a(k, j)) != 0) return false;
      continue;
    }
    const T piv = a(k, k);
    for (int i = k + 1; i < s; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      const T f = a(i, k) / piv;
      for (int j = i; j < s; ++j) {
        if (sgn(a(k, j)) == 0) continue;
        a(i, j) -= f * a(k, j);
        if (j != i) a(j, i) = a(i, j);
      }
    }
  }
  return true;
}

template bool psd_exact(const DenseMatrix<Rational>&);
template bool psd_exact(const DenseMatrix<QuadExt>&);

std::vector<std::string> check_point(const ConicProgram<Rational>& p, const std::vector<Rational>& x,
                                     bool check_blocks) {
  if (static_cast<int>(x.size()) != p.num_vars) throw std::invalid_argument("check_point: size mismatch");
  std::vector<std::string> bad;
  auto name = [](const std::string& label, const char* kind, std::size_t r) {
    return label.empty() ? std::string(kind) + " " + std::to_string(r) : label;
  };
  for (std::size_t r = 0; r < p.equalities.size(); ++r)
    if (evaluate(p.equalities[r].terms, x) != p.equalities[r].rhs) bad.push_back(name(p.equalities[r].label, "eq", r));
  for (std::size_t r = 0; r < p.inequalities.size(); ++r)
    if (evaluate(p.inequalities[r].terms, x) < p.inequalities[r].rhs)
      bad.push_back(name(p.inequalities[r].label, "ineq", r));
  if (!check_blocks) return bad;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& blk = p.blocks[b];
    DenseMatrix<Rational> m(blk.side, blk.side);
    for (const auto& e : blk.entries) {
      Rational v = e.var < 0 ? e.coef : e.coef * x[e.var];
      m(e.row, e.col) += v;
      if (e.row != e.col) m(e.col, e.row) += v;
    }
    bool ok = true;
    if (blk.diagonal) {
      for (int r = 0; r < blk.side; ++r) ok = ok && m(r, r) >= 0;
    } else {
      ok = psd_exact(m);
    }
    if (!ok) bad.push_back(name(blk.label, "block", b));
  }
  return bad;
}

QuadExt parse_quadext(const std::string& text) {
  const std::string tag = "*sqrt3";
  const auto pos = text.find(tag);
  if (pos == std::string::npos) return QuadExt(parse_rational(text));
  if (pos + tag.size() != text.size()) throw std::invalid_argument("malformed value '" + text + "'");
  const std::string head = text.substr(0, pos);
  // Split at the last sign that is not the leading one.
  std::size_t split = std::string::npos;
  for (std::size_t c = head.size(); c-- > 1;)
    if ((head[c] == '+' || head[c] == '-') && head[c - 1] != 'e' && head[c - 1] != 'E') {
      split = c;
      break;
    }
  if (split == std::string::npos) return QuadExt(0, parse_rational(head));
  Rational a = parse_rational(head.substr(0, split));
  Rational b = parse_rational(head.substr(split + 1));
  return QuadExt(a, head[split] == '-' ? Rational(-b) : b);
}

namespace {

QuadExt json_value(const nlohmann::json& v) {
  if (v.is_string()) return parse_quadext(v.get<std::string>());
  if (v.is_number()) return QuadExt(parse_rational(v.dump()));
  if (v.is_object()) {
    // {"rat": "p/q", "sqrt3": "r/s"} stands for p/q + (r/s) sqrt 3.
    auto part = [&](const char* key) {
      if (!v.contains(key)) return Rational(0);
      const auto& f = v.at(key);
      return parse_rational(f.is_string() ? f.get<std::string>() : f.dump());
    };
    return QuadExt(part("rat"), part("sqrt3"));
  }
  throw std::invalid_argument("certificate entries must be numbers, strings or {rat, sqrt3} objects");
}

ModelShape parse_shape(const std::string& s) {
  if (s == "red_lovasz") return ModelShape::lovasz;
  if (s == "sdpx_relax") return ModelShape::relaxation;
  throw std::invalid_argument("unsupported certificate model '" + s + "'");
}

}  // namespace

DualCertificate parse_certificate(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("certificate is not valid JSON: ") + e.what());
  }
  DualCertificate c;
  try {
    c.n = j.at("n").get<int>();
    c.K = j.at("K").get<long>();
    c.delta = j.at("delta").get<int>();
    c.shape = parse_shape(j.at("model").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("certificate header: ") + e.what());
  }
  if (c.n < 1 || c.n > 30 || c.K < 1 || c.delta < 1 || c.delta > c.n + 1)
    throw std::invalid_argument("certificate parameters out of range");
  std::map<std::string, BlockId> ids;
  for (BlockId id : block_layout(c.n)) ids[id.key()] = id;
  if (j.contains("blocks")) {
    for (const auto& [key, rows] : j.at("blocks").items()) {
      auto it = ids.find(key);
      if (it == ids.end()) throw std::invalid_argument("unknown block '" + key + "'");
      const int side = block_side(c.n, it->second);
      if (!rows.is_array() || static_cast<int>(rows.size()) != side)
        throw std::invalid_argument("block " + key + " must have " + std::to_string(side) + " rows");
      DenseMatrix<QuadExt> m(side, side);
      for (int r = 0; r < side; ++r) {
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != side)
          throw std::invalid_argument("block " + key + " row " + std::to_string(r) + " has the wrong length");
        for (int col = 0; col < side; ++col) m(r, col) = json_value(rows[r][col]);
      }
      c.blocks[it->second] = std::move(m);
    }
  }
  if (j.contains("scalars"))
    for (const auto& [key, v] : j.at("scalars").items()) c.scalars[key] = json_value(v);
  if (j.contains("alpha")) c.alpha = j.at("alpha").is_string() ? j.at("alpha").get<std::string>() : j.at("alpha").dump();
  return c;
}

DualCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open certificate '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

std::string certificate_to_json(const DualCertificate& c) {
  nlohmann::ordered_json j;
  j["n"] = c.n;
  j["K"] = c.K;
  j["delta"] = c.delta;
  j["model"] = to_string(c.shape);
  nlohmann::ordered_json blocks = nlohmann::ordered_json::object();
  for (const auto& [id, m] : c.blocks) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int col = 0; col < m.cols(); ++col) row.push_back(to_string(m(r, col)));
      rows.push_back(std::move(row));
    }
    blocks[id.key()] = std::move(rows);
  }
  j["blocks"] = std::move(blocks);
  nlohmann::ordered_json scalars = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.scalars) scalars[k] = to_string(v);
  j["scalars"] = std::move(scalars);
  j["alpha"] = c.alpha;
  return j.dump(1);
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["certified"] = certified;
  j["verdict"] = verdict;
  j["alpha"] = qcb::to_string(alpha);
  j["alpha_value"] = alpha_value;
  j["budget"] = budget;
  j["scale"] = scale;
  j["max_residual"] = max_residual;
  j["block_psd"] = block_psd;
  return j.dump(1);
}

VerificationReport verify_certificate(const DualCertificate& c, double budget) {
  const int n = c.n;
  VerificationReport rep;
  rep.budget = budget;

  XVector<QuadExt> y;
  for (const auto& bs : block_structure(n)) {
    auto it = c.blocks.find(bs.id);
    if (it == c.blocks.end()) continue;
    const auto& Y = it->second;
    for (const auto& term : bs.terms) {
      const QuadExt coef = QuadExt::pow_sqrt3(term.x.i + term.x.j) * QuadExt(term.scaled);
      y[term.x] += coef * Y(term.row, term.col);
      if (term.row != term.col) y[term.x.transposed()] += coef * Y(term.col, term.row);
    }
  }
  for (auto& [x, v] : y) v = v / QuadExt(Rational(gamma_coeff(x.i, x.j, x.t, x.p, n)));
  auto Y = [&](int i, int j, int t, int p) {
    auto it = y.find({i, j, t, p});
    return it == y.end() ? QuadExt(0) : it->second;
  };
  auto scalar = [&](const std::string& k) {
    auto it = c.scalars.find(k);
    return it == c.scalars.end() ? QuadExt(0) : it->second;
  };

  std::map<std::string, QuadExt> worst;
  auto record = [&](const std::string& family, const QuadExt& r) {
    QuadExt a = r.abs();
    auto it = worst.find(family);
    if (it == worst.end() || a > it->second) worst[family] = a;
  };

  const Rational two_n = pow2(n);
  if (c.shape == ModelShape::lovasz) {
    const QuadExt w =
        c.scalars.count("w") ? scalar("w") : -Y(n, n, n, n) - QuadExt(2) * Y(n, 0, 0, 0);
    for (int i = c.delta; i <= n; ++i) record("diagonal", Y(i, i, i, i) + w + QuadExt(2) * Y(i, 0, 0, 0));
    for (const Tuple& x : index_set(n))
      if (x.i >= c.delta && x.j >= c.delta && !x.odd() && x.product_weight() >= c.delta) record("zero", Y(x.i, x.j, x.t, x.p));
    rep.alpha = QuadExt(two_n - 1) * w - Y(0, 0, 0, 0);
  } else if (c.shape == ModelShape::relaxation) {
    CoeffTable ct(n);
    const Rational K(c.K);
    auto D = [&](int i) {
      QuadExt s = 0;
      for (int j = 0; j < c.delta; ++j) s += QuadExt(Rational(ct.kraw(j, i))) * scalar("C" + std::to_string(j));
      return s / QuadExt(two_n);
    };
    auto Q = [&](int k) { return scalar("Q" + std::to_string(k)); };
    for (int i = 1; i <= n; ++i) {
      QuadExt r = QuadExt(K) * D(i) + QuadExt(two_n / K - 2) * Q(i) - QuadExt(2) * Y(i, 0, 0, 0) - Q(0) -
                  Y(i, i, i, i);
      if (i < c.delta) r -= scalar("C" + std::to_string(i));
      record("weight", r);
    }
    const TupleVars classes = make_tuple_vars(n, MergeMode::permutation, 0);
    for (const auto& members : classes.members) {
      const Tuple& x0 = members.front();
      if (x0.i == 0 || x0.j == 0 || x0.product_weight() == 0) continue;
      QuadExt s = 0;
      for (const Tuple& x : members)
        s += QuadExt(Rational(gamma_coeff(x.i, x.j, x.t, x.p, n))) * (Y(x.i, x.j, x.t, x.p) + Q(x.product_weight()));
      record("class", s);
    }
    rep.alpha = QuadExt(K) * D(0) - scalar("C0") + QuadExt(two_n / K - 1) * Q(0) - Y(0, 0, 0, 0);
  } else {
    throw std::invalid_argument("verify_certificate: unsupported model");
  }
  rep.alpha_value = rep.alpha.to_double();

  double scale = 1;
  for (const auto& [id, m] : c.blocks) {
    for (int r = 0; r < m.rows(); ++r)
      for (int col = 0; col < m.cols(); ++col) scale += std::fabs(m(r, col).to_double());
  }
  for (const auto& [k, v] : c.scalars) scale += std::fabs(v.to_double());
  rep.scale = scale;

  bool psd_ok = true;
  for (const auto& [id, m] : c.blocks) {
    const bool ok = psd_exact(m);
    rep.block_psd[id.key()] = ok;
    psd_ok = psd_ok && ok;
  }
  const QuadExt limit{Rational(budget)};
  bool residual_ok = true;
  for (const auto& [family, r] : worst) {
    rep.max_residual[family] = r.to_double();
    residual_ok = residual_ok && r <= limit;
  }
  const bool positive = rep.alpha > QuadExt(Rational(budget) * Rational(scale));
  if (!psd_ok)
    rep.verdict = "psd_failed";
  else if (!residual_ok)
    rep.verdict = "residual_exceeded";
  else if (!positive)
    rep.verdict = "alpha_not_positive";
  else
    rep.verdict = "certified";
  rep.certified = psd_ok && residual_ok && positive;
  return rep;
}

}  // namespace qcb
