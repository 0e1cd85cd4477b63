#include <vector>

#include "qstates/error.hpp"
#include "qstates/json_io.hpp"

namespace qstates {

void schema_error(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::Schema, (pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

double require_number(const json& j, const std::string& key, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(pointer + "/" + key, "missing required number");
  if (!it->is_number()) schema_error(pointer + "/" + key, "expected a number");
  return it->get<double>();
}

double optional_number(const json& j, const std::string& key, double fallback, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) schema_error(pointer + "/" + key, "expected a number");
  return it->get<double>();
}

namespace {

std::vector<double> number_array(const json& j, const std::string& pointer, std::size_t expected = 0) {
  if (!j.is_array()) schema_error(pointer, "expected an array of numbers");
  if (expected != 0 && j.size() != expected) {
    schema_error(pointer, "expected " + std::to_string(expected) + " entries");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(pointer + "/" + std::to_string(i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

Family read_family(const json& j, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  auto it = j.find("family");
  if (it == j.end() || !it->is_string()) schema_error(pointer + "/family", "missing family string");
  try {
    return family_from_string(it->get<std::string>());
  } catch (const Error&) {
    schema_error(pointer + "/family", "unknown family '" + it->get<std::string>() + "'");
  }
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

const json& member(const json& j, const char* key, const std::string& pointer) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(pointer + "/" + key, "missing required field");
  return *it;
}

}  // namespace

json to_json(const GroupElement& g) {
  json j;
  j["family"] = std::string(to_string(g.family()));
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      j["a"] = x.a;
      j["b"] = x.b;
      j["c"] = x.c;
      break;
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      j["a"] = x.a;
      j["b"] = x.b;
      j["c"] = x.c;
      j["e"] = x.e;
      break;
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      json A = json::array();
      for (int r = 0; r < 3; ++r) A.push_back({x.A(r, 0), x.A(r, 1), x.A(r, 2)});
      j["A"] = A;
      j["c"] = {x.c.x(), x.c.y(), x.c.z()};
      break;
    }
    case Family::SU2: {
      const auto& q = g.su2();
      j["q"] = {q.w, q.x, q.y, q.z};
      break;
    }
    case Family::Torus: j["angles"] = g.torus().angles; break;
  }
  return j;
}

json to_json(const AlgebraElement& Z) {
  return {{"family", std::string(to_string(Z.family))}, {"coords", vector_json(Z.coords)}};
}

json to_json(const CoadjointVector& w) {
  return {{"family", std::string(to_string(w.family))}, {"coords", vector_json(w.coords)}};
}

GroupElement group_element_from_json(const json& j, const std::string& pointer) {
  const Family f = read_family(j, pointer);
  GroupElement g;
  switch (f) {
    case Family::Heisenberg:
      g = HeisenbergElement{require_number(j, "a", pointer), require_number(j, "b", pointer),
                            require_number(j, "c", pointer)};
      break;
    case Family::Bargmann:
      g = BargmannElement{require_number(j, "a", pointer), require_number(j, "b", pointer),
                          require_number(j, "c", pointer), require_number(j, "e", pointer)};
      break;
    case Family::Euclid: {
      const json& A = member(j, "A", pointer);
      if (!A.is_array() || A.size() != 3) schema_error(pointer + "/A", "expected a 3x3 array");
      EuclidElement e;
      for (int r = 0; r < 3; ++r) {
        auto row = number_array(A[r], pointer + "/A/" + std::to_string(r), 3);
        for (int c = 0; c < 3; ++c) e.A(r, c) = row[c];
      }
      auto c = number_array(member(j, "c", pointer), pointer + "/c", 3);
      e.c = Vec3(c[0], c[1], c[2]);
      g = e;
      break;
    }
    case Family::SU2: {
      auto q = number_array(member(j, "q", pointer), pointer + "/q", 4);
      g = SU2Element{q[0], q[1], q[2], q[3]};
      break;
    }
    case Family::Torus: {
      auto t = number_array(member(j, "angles", pointer), pointer + "/angles");
      if (t.empty()) schema_error(pointer + "/angles", "expected at least one angle");
      g = TorusElement{t};
      break;
    }
  }
  try {
    validate(g);
  } catch (const Error& e) {
    schema_error(pointer, e.what());
  }
  return g;
}

AlgebraElement algebra_element_from_json(const json& j, const std::string& pointer) {
  const Family f = read_family(j, pointer);
  auto c = number_array(member(j, "coords", pointer), pointer + "/coords");
  if (f != Family::Torus && c.size() != algebra_dimension(f)) {
    schema_error(pointer + "/coords", "expected " + std::to_string(algebra_dimension(f)) + " coordinates");
  }
  AlgebraElement Z{f, Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()))};
  return Z;
}

CoadjointVector coadjoint_from_json(const json& j, const std::string& pointer) {
  const Family f = read_family(j, pointer);
  auto c = number_array(member(j, "coords", pointer), pointer + "/coords");
  if (f != Family::Torus && c.size() != algebra_dimension(f)) {
    schema_error(pointer + "/coords", "expected " + std::to_string(algebra_dimension(f)) + " coordinates");
  }
  return {f, Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()))};
}

}  // namespace qstates
