#include "fejer/poly_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "fejer/errors.hpp"

namespace fejer::poly {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::kArgument, "polynomial file: " + what);
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    bad(std::string("missing field \"") + name + "\"");
  }
  return doc.at(name);
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

struct Shape {
  Index rows = 0;
  Index cols = 0;
};

Shape read_size(const json& doc) {
  const json& s = field(doc, "size");
  if (s.is_array()) {
    if (s.size() != 2) bad("\"size\" must be r or [rows, cols]");
    return {as_int(s[0], "size"), as_int(s[1], "size")};
  }
  const int r = as_int(s, "size");
  return {r, r};
}

json size_json(Index rows, Index cols) {
  if (rows == cols) return rows;
  return json::array({rows, cols});
}

json entry(const ComplexMatrix& m, std::vector<int> index) {
  return json{{"index", std::move(index)}, {"matrix", matrix_to_json(m)}};
}

// Collects the coefficient list into a map keyed by index tuple.
std::map<std::vector<int>, ComplexMatrix> read_coeffs(const json& doc,
                                                      std::size_t arity,
                                                      Shape shape) {
  const json& list = field(doc, "coeffs");
  if (!list.is_array()) bad("\"coeffs\" must be an array");
  std::map<std::vector<int>, ComplexMatrix> out;
  for (const json& item : list) {
    const json& idx = field(item, "index");
    if (!idx.is_array() || idx.size() != arity) {
      bad("each \"index\" must list " + std::to_string(arity) + " integer(s)");
    }
    std::vector<int> key;
    for (const json& v : idx) key.push_back(as_int(v, "index"));
    ComplexMatrix m = matrix_from_json(field(item, "matrix"), shape.rows, shape.cols);
    auto [it, inserted] = out.emplace(key, std::move(m));
    if (!inserted) bad("duplicate coefficient index");
  }
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    bad("matrix must have " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      bad("matrix row must have " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& z = row[static_cast<std::size_t>(c)];
      if (z.is_number()) {
        m(i, c) = Complex(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() &&
                 z[1].is_number()) {
        m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
      } else {
        bad("matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

PolyValue from_json(const json& doc) {
  if (!doc.is_object()) bad("top level must be an object");
  const int vars = as_int(field(doc, "vars"), "vars");
  if (vars != 1 && vars != 2) bad("\"vars\" must be 1 or 2");
  const Shape shape = read_size(doc);
  if (shape.rows < 1 || shape.cols < 1) bad("\"size\" must be positive");

  std::string kind = "laurent";
  if (doc.contains("kind")) {
    if (!doc.at("kind").is_string()) bad("\"kind\" must be a string");
    kind = doc.at("kind").get<std::string>();
  }
  if (kind != "laurent" && kind != "analytic") {
    bad("\"kind\" must be \"laurent\" or \"analytic\"");
  }
  const bool analytic = kind == "analytic";
  if (!analytic && shape.rows != shape.cols) bad("Laurent coefficients must be square");

  const json& degrees = field(doc, "degrees");
  if (!degrees.is_array() || static_cast<int>(degrees.size()) != vars) {
    bad("\"degrees\" must list one count per variable");
  }
  std::vector<int> deg;
  for (const json& d : degrees) {
    deg.push_back(as_int(d, "degrees"));
    if (deg.back() < 0) bad("degrees must be nonnegative");
  }

  const auto coeffs = read_coeffs(doc, static_cast<std::size_t>(vars), shape);
  const ComplexMatrix zero = ComplexMatrix::Zero(shape.rows, shape.cols);
  auto in_range = [&](const std::vector<int>& key) {
    for (std::size_t v = 0; v < key.size(); ++v) {
      const int lo = analytic ? 0 : -deg[v];
      if (key[v] < lo || key[v] > deg[v]) return false;
    }
    return true;
  };
  for (const auto& [key, m] : coeffs) {
    if (!in_range(key)) {
      bad(analytic ? "analytic index negative or beyond degree"
                   : "index beyond declared degree");
    }
  }
  auto lookup = [&](std::vector<int> key) {
    const auto it = coeffs.find(key);
    return it == coeffs.end() ? zero : it->second;
  };

  if (vars == 1) {
    const int m = deg[0];
    std::vector<ComplexMatrix> list;
    if (analytic) {
      for (int k = 0; k <= m; ++k) list.push_back(lookup({k}));
      return MatrixAnalyticPoly1(std::move(list));
    }
    for (int k = -m; k <= m; ++k) list.push_back(lookup({k}));
    return MatrixLaurentPoly1(std::move(list));
  }

  const int m1 = deg[0];
  const int m2 = deg[1];
  std::vector<ComplexMatrix> list;
  if (analytic) {
    for (int j = 0; j <= m1; ++j) {
      for (int k = 0; k <= m2; ++k) list.push_back(lookup({j, k}));
    }
    return MatrixAnalyticPoly2(m1, m2, std::move(list));
  }
  for (int j = -m1; j <= m1; ++j) {
    for (int k = -m2; k <= m2; ++k) list.push_back(lookup({j, k}));
  }
  return MatrixLaurentPoly2(m1, m2, std::move(list));
}

json to_json(const MatrixLaurentPoly1& q) {
  json coeffs = json::array();
  for (int k = -q.degree(); k <= q.degree(); ++k) {
    if (!q.coeff(k).isZero(0.0)) coeffs.push_back(entry(q.coeff(k), {k}));
  }
  return json{{"vars", 1},
              {"size", q.size()},
              {"degrees", json::array({q.degree()})},
              {"kind", "laurent"},
              {"coeffs", std::move(coeffs)}};
}

json to_json(const MatrixAnalyticPoly1& p) {
  json coeffs = json::array();
  for (int k = 0; k <= p.degree(); ++k) coeffs.push_back(entry(p.coeff(k), {k}));
  return json{{"vars", 1},
              {"size", size_json(p.rows(), p.cols())},
              {"degrees", json::array({p.degree()})},
              {"kind", "analytic"},
              {"coeffs", std::move(coeffs)}};
}

json to_json(const MatrixLaurentPoly2& q) {
  json coeffs = json::array();
  for (int j = -q.degree1(); j <= q.degree1(); ++j) {
    for (int k = -q.degree2(); k <= q.degree2(); ++k) {
      if (!q.coeff(j, k).isZero(0.0)) coeffs.push_back(entry(q.coeff(j, k), {j, k}));
    }
  }
  return json{{"vars", 2},
              {"size", q.size()},
              {"degrees", json::array({q.degree1(), q.degree2()})},
              {"kind", "laurent"},
              {"coeffs", std::move(coeffs)}};
}

json to_json(const MatrixAnalyticPoly2& f) {
  json coeffs = json::array();
  for (int j = 0; j <= f.degree1(); ++j) {
    for (int k = 0; k <= f.degree2(); ++k) coeffs.push_back(entry(f.coeff(j, k), {j, k}));
  }
  return json{{"vars", 2},
              {"size", size_json(f.rows(), f.cols())},
              {"degrees", json::array({f.degree1(), f.degree2()})},
              {"kind", "analytic"},
              {"coeffs", std::move(coeffs)}};
}

PolyValue read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

std::vector<MatrixAnalyticPoly2> factors2_from_json(const json& doc) {
  if (!doc.is_array()) bad("factor list must be a JSON array");
  std::vector<MatrixAnalyticPoly2> out;
  for (const json& item : doc) {
    PolyValue v = from_json(item);
    if (auto* f = std::get_if<MatrixAnalyticPoly2>(&v)) {
      out.push_back(std::move(*f));
    } else {
      bad("factor list entries must be two-variable analytic polynomials");
    }
  }
  return out;
}

}  // namespace fejer::poly
