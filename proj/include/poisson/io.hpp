// Copyright 2026 The Poissonization Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POISSON_IO_HPP
#define POISSON_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "poisson/algebra.hpp"
#include "poisson/channels.hpp"
#include "poisson/words.hpp"

namespace poisson {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/** A number, or a [re, im] pair. */
inline cplx complex_from_json(const json &j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw FormatError("expected a number or a [re, im] pair");
}

inline json dense_to_json(const Matrix &m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"re", re}, {"im", im}};
}

/** "re" is required, "im" defaults to zero. */
inline Matrix dense_from_json(const json &j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.contains("re")) throw FormatError("matrix needs an \"re\" array");
  Matrix m = Matrix::Zero(rows, cols);
  auto fill = [&](const json &a, bool imag) {
    if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != rows)
      throw FormatError("matrix row count mismatch");
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!a[i].is_array() || static_cast<Eigen::Index>(a[i].size()) != cols)
        throw FormatError("matrix column count mismatch");
      for (Eigen::Index c = 0; c < cols; ++c)
        m(i, c) += imag ? cplx(0.0, a[i][c].get<double>()) : cplx(a[i][c].get<double>(), 0.0);
    }
  };
  fill(j["re"], false);
  if (j.contains("im")) fill(j["im"], true);
  return m;
}

inline json element_to_json(const Element &x) {
  json blocks = json::array();
  for (const auto &b : x.blocks()) {
    json jb = dense_to_json(b);
    jb["dim"] = b.rows();
    blocks.push_back(jb);
  }
  return {{"blocks", blocks}};
}

inline Element element_from_json(const json &j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
    throw FormatError("element needs a \"blocks\" array");
  std::vector<Matrix> b;
  for (const auto &jb : j["blocks"]) {
    if (!jb.contains("dim")) throw FormatError("block needs \"dim\"");
    const int d = jb["dim"].get<int>();
    if (d < 1) throw FormatError("block dim must be positive");
    b.push_back(dense_from_json(jb, d, d));
  }
  if (b.empty()) throw FormatError("element needs at least one block");
  return Element(std::move(b));
}

inline json weight_to_json(const Weight &w) { return {{"density", element_to_json(w.density())}}; }

inline Weight weight_from_json(const json &j) {
  if (!j.is_object() || !j.contains("density")) throw FormatError("weight needs \"density\"");
  return Weight(element_from_json(j["density"]));
}

inline json algebra_to_json(const Algebra &a) { return a.dims(); }

inline Algebra algebra_from_json(const json &j) {
  return Algebra(j.get<std::vector<int>>());
}

/** { "kind": "empty", "words": [[<element>, ...], ...] } */
inline json words_to_json(WordKind kind, const std::vector<Letters> &words) {
  json out = {{"kind", to_string(kind)}, {"words", json::array()}};
  for (const auto &l : words) {
    json jl = json::array();
    for (const auto &x : l) jl.push_back(element_to_json(x));
    out["words"].push_back(jl);
  }
  return out;
}

inline std::vector<PoissonWord> words_from_json(const json &j) {
  if (!j.contains("words")) throw FormatError("word file needs \"words\"");
  const WordKind kind = word_kind_from_string(j.value("kind", std::string("empty")));
  std::vector<PoissonWord> out;
  for (const auto &jl : j["words"]) {
    PoissonWord w{kind, {}};
    for (const auto &jx : jl) w.letters.push_back(element_from_json(jx));
    out.push_back(std::move(w));
  }
  return out;
}

/**
 * Either { "kind": "identity" | "diagonal_expectation", "algebra": [dims] },
 * { "kind": "unitary_conjugation", "unitary": <element> },
 * { "kind": "block_embedding", "src": [dims], "dst": [dims], "target": [k...] },
 * { "kind": "mixture", "c": c, "first": <map>, "second": <map> }, or
 * { "src": [dims], "dst": [dims], "action": {"re", "im"}, "flags": {...} }.
 */
inline LinearMap map_from_json(const json &j) {
  const std::string kind = j.value("kind", std::string("matrix"));
  if (kind == "identity") return LinearMap::identity(algebra_from_json(j.at("algebra")));
  if (kind == "diagonal_expectation")
    return LinearMap::diagonal_expectation(algebra_from_json(j.at("algebra")));
  if (kind == "unitary_conjugation")
    return LinearMap::unitary_conjugation(element_from_json(j.at("unitary")));
  if (kind == "block_embedding")
    return LinearMap::block_embedding(algebra_from_json(j.at("src")),
                                      algebra_from_json(j.at("dst")),
                                      j.at("target").get<std::vector<int>>());
  if (kind == "mixture")
    return LinearMap::mixture(j.at("c").get<double>(), map_from_json(j.at("first")),
                              map_from_json(j.at("second")));
  if (kind != "matrix") throw FormatError("unknown map kind: " + kind);
  const Algebra src = algebra_from_json(j.at("src")), dst = algebra_from_json(j.at("dst"));
  MapFlags f;
  if (j.contains("flags")) {
    const json &jf = j["flags"];
    f.unital = jf.value("unital", false);
    f.positive = jf.value("positive", false);
    f.completely_positive = jf.value("completely_positive", false);
    f.homomorphism = jf.value("homomorphism", false);
  }
  return LinearMap(src, dst, dense_from_json(j.at("action"), dst.dimension(), src.dimension()),
                   f);
}

inline json map_to_json(const LinearMap &t) {
  json out = {{"kind", "matrix"},
              {"src", algebra_to_json(t.src())},
              {"dst", algebra_to_json(t.dst())},
              {"action", dense_to_json(t.action())}};
  out["flags"] = {{"unital", t.flags().unital},
                  {"positive", t.flags().positive},
                  {"completely_positive", t.flags().completely_positive},
                  {"homomorphism", t.flags().homomorphism}};
  return out;
}

inline json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string &path, const json &j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace poisson

#endif  // POISSON_IO_HPP
