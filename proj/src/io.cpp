#include "tl/io.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "io_detail.hpp"

namespace tl {

namespace {

using detail::Json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw parse_error(where + ": " + what);
}

std::string at(const std::string& where, int a, int b = -1) {
  std::string out = where + "[" + std::to_string(a) + "]";
  if (b >= 0) out += "[" + std::to_string(b) + "]";
  return out;
}

const Json& field(const Json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const Json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown field '" + it.key() + "'");
  }
}

int int_value(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double double_value(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::string string_value(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<int> int_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of integers");
  std::vector<int> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) out.push_back(int_value(j[i], at(where, static_cast<int>(i))));
  return out;
}

std::vector<std::vector<int>> int_table(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of rows");
  std::vector<std::vector<int>> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) out.push_back(int_list(j[i], at(where, static_cast<int>(i))));
  return out;
}

Complex complex_value(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a [re, im] pair");
  return {double_value(j[0], where), double_value(j[1], where)};
}

Matrix matrix_value(const Json& j, const std::string& where, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(where, "expected " + std::to_string(n) + " matrix row(s)");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(at(where, i), "expected " + std::to_string(n) + " entries");
    for (int k = 0; k < n; ++k) m(i, k) = complex_value(row[k], at(where, i, k));
  }
  return m;
}

bool is_permutation(const std::vector<int>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

struct ParsedGroup {
  FiniteGroup group;
  std::string kind;
  std::vector<std::vector<int>> generators;     // permutation-generators input
  std::vector<std::vector<int>> element_perms;  // letter permutation per element
};

ParsedGroup parse_group(const Json& j) {
  const std::string where = "group";
  if (!j.is_object()) fail(where, "expected an object");
  ParsedGroup out;
  out.kind = string_value(field(j, where, "kind"), "group.kind");

  if (out.kind == "cyclic") {
    check_keys(j, where, {"kind", "n"});
    const int n = int_value(field(j, where, "n"), "group.n");
    if (n < 1) fail("group.n", "order must be positive");
    out.group = cyclic_group(n);
    return out;
  }
  if (out.kind == "permutation-generators") {
    check_keys(j, where, {"kind", "letters", "generators"});
    const int letters = int_value(field(j, where, "letters"), "group.letters");
    if (letters < 1) fail("group.letters", "need at least one letter");
    out.generators = int_table(field(j, where, "generators"), "group.generators");
    for (size_t i = 0; i < out.generators.size(); ++i)
      if (!is_permutation(out.generators[i], letters))
        fail(at("group.generators", static_cast<int>(i)), "not a permutation of the letters");
    out.group = group_from_permutations(letters, out.generators, &out.element_perms);
    return out;
  }
  if (out.kind == "cayley") {
    check_keys(j, where, {"kind", "table"});
    const auto table = int_table(field(j, where, "table"), "group.table");
    if (table.empty()) fail("group.table", "table is empty");
    // Semantic defects stay in the struct so validation can name them with
    // witnesses; only build the derived fields when the table is a group.
    if (group_issues(table).empty()) {
      out.group = group_from_table(table);
    } else {
      out.group.order = static_cast<int>(table.size());
      out.group.cayley = table;
      out.group.identity = 0;
      out.group.inverse.assign(table.size(), 0);
    }
    return out;
  }
  fail("group.kind", "unknown kind '" + out.kind + "'");
}

std::vector<std::vector<int>> parse_action(const Json& j, const ParsedGroup& pg, int points) {
  const std::string where = "action";
  if (!j.is_object()) fail(where, "expected an object");
  const std::string kind = string_value(field(j, where, "kind"), "action.kind");
  const FiniteGroup& group = pg.group;

  if (kind == "table") {
    check_keys(j, where, {"kind", "table"});
    const auto table = int_table(field(j, where, "table"), "action.table");
    if (static_cast<int>(table.size()) != group.order)
      fail("action.table", "need one row per group element");
    for (int g = 0; g < group.order; ++g) {
      if (static_cast<int>(table[g].size()) != points)
        fail(at("action.table", g), "need one entry per point");
      for (int x = 0; x < points; ++x)
        if (table[g][x] < 0 || table[g][x] >= points)
          fail(at("action.table", g, x), "point out of range");
    }
    return table;
  }

  if (kind == "natural") {
    check_keys(j, where, {"kind"});
    if (pg.kind != "permutation-generators")
      fail(where, "the natural action needs a permutation-generators group");
    if (static_cast<int>(pg.element_perms.front().size()) != points)
      fail(where, "the natural action needs as many points as letters");
    return pg.element_perms;
  }

  if (kind == "generators") {
    check_keys(j, where, {"kind", "images"});
    const auto images = int_table(field(j, where, "images"), "action.images");
    for (size_t i = 0; i < images.size(); ++i)
      if (!is_permutation(images[i], points))
        fail(at("action.images", static_cast<int>(i)), "not a permutation of the points");

    std::vector<int> gen_ids;
    if (pg.kind == "cyclic") {
      if (group.order < 2) fail(where, "the trivial group needs an explicit action table");
      if (images.size() != 1) fail("action.images", "a cyclic group takes exactly one image");
      gen_ids.push_back(1);
    } else if (pg.kind == "permutation-generators") {
      if (images.size() != pg.generators.size())
        fail("action.images", "need one image per group generator");
      for (size_t i = 0; i < pg.generators.size(); ++i) {
        int id = -1;
        for (size_t g = 0; g < pg.element_perms.size(); ++g)
          if (pg.element_perms[g] == pg.generators[i]) {
            id = static_cast<int>(g);
            break;
          }
        if (id < 0) fail(at("group.generators", static_cast<int>(i)), "generator not found");
        gen_ids.push_back(id);
      }
    } else {
      fail(where, "a cayley group needs an explicit action table");
    }

    // sigma is a left action, so fill outward from the identity with
    // sigma[s g] = image_s composed with sigma[g].
    std::vector<std::vector<int>> sigma(group.order);
    sigma[group.identity].resize(points);
    std::iota(sigma[group.identity].begin(), sigma[group.identity].end(), 0);
    std::vector<int> todo = {group.identity};
    for (size_t head = 0; head < todo.size(); ++head) {
      const int g = todo[head];
      for (size_t i = 0; i < gen_ids.size(); ++i) {
        const int h = group.mul(gen_ids[i], g);
        if (!sigma[h].empty()) continue;
        sigma[h].resize(points);
        for (int x = 0; x < points; ++x) sigma[h][x] = images[i][sigma[g][x]];
        todo.push_back(h);
      }
    }
    for (int g = 0; g < group.order; ++g)
      if (sigma[g].empty())
        fail("action.images", "the images do not reach element " + std::to_string(g));
    return sigma;
  }

  fail("action.kind", "unknown kind '" + kind + "'");
}

std::vector<std::vector<Matrix>> parse_cocycle(const Json* j, int order, int points, int n) {
  std::vector<std::vector<Matrix>> out(order, std::vector<Matrix>(points, Matrix::Identity(n, n)));
  if (!j) return out;
  const std::string where = "cocycle";
  if (!j->is_array() || static_cast<int>(j->size()) != order)
    fail(where, "need one row per group element");
  for (int g = 0; g < order; ++g) {
    const Json& row = (*j)[g];
    if (!row.is_array() || static_cast<int>(row.size()) != points)
      fail(at(where, g), "need one matrix per point");
    for (int x = 0; x < points; ++x) out[g][x] = matrix_value(row[x], at(where, g, x), n);
  }
  return out;
}

Tolerances parse_tolerances(const Json* j) {
  Tolerances tol;
  if (!j) return tol;
  const std::string where = "tolerances";
  if (!j->is_object()) fail(where, "expected an object");
  check_keys(*j, where, {"rank_tol", "invert_tol", "norm_tol"});
  if (const Json* v = optional_field(*j, "rank_tol")) tol.rank_tol = double_value(*v, "tolerances.rank_tol");
  if (const Json* v = optional_field(*j, "invert_tol"))
    tol.invert_tol = double_value(*v, "tolerances.invert_tol");
  if (const Json* v = optional_field(*j, "norm_tol")) tol.norm_tol = double_value(*v, "tolerances.norm_tol");
  return tol;
}

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("document", e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

DynSystem parse_system_raw(const std::string& text) {
  const Json doc = parse_document(text);
  if (!doc.is_object()) fail("document", "expected an object");
  check_keys(doc, "document",
             {"group", "points", "action", "fiber_dim", "cocycle", "z_partition", "tolerances"});

  DynSystem sys;
  const ParsedGroup pg = parse_group(field(doc, "document", "group"));
  sys.group = pg.group;

  sys.points = int_value(field(doc, "document", "points"), "points");
  if (sys.points < 1) fail("points", "need at least one point");
  if (const Json* v = optional_field(doc, "fiber_dim")) sys.fiber_dim = int_value(*v, "fiber_dim");
  if (sys.fiber_dim < 1) fail("fiber_dim", "need a positive fiber dimension");

  sys.sigma = parse_action(field(doc, "document", "action"), pg, sys.points);
  sys.cocycle =
      parse_cocycle(optional_field(doc, "cocycle"), sys.group.order, sys.points, sys.fiber_dim);

  if (const Json* v = optional_field(doc, "z_partition")) {
    sys.blocks = int_table(*v, "z_partition");
  } else {
    for (int x = 0; x < sys.points; ++x) sys.blocks.push_back({x});
  }

  sys.tol = parse_tolerances(optional_field(doc, "tolerances"));
  return sys;
}

DynSystem parse_system(const std::string& text) { return validate(parse_system_raw(text)); }

DynSystem load_system_raw(const std::string& path) { return parse_system_raw(read_file(path)); }

DynSystem load_system(const std::string& path) { return parse_system(read_file(path)); }

std::string serialize_system(const DynSystem& sys) {
  return detail::system_json(sys).dump(2) + "\n";
}

std::string system_digest(const DynSystem& sys) {
  const std::string text = serialize_system(sys);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CPElement parse_element(const DynSystem& sys, const std::string& text) {
  if (!sys.validated) throw precondition_error("parse_element: system not validated");
  const Json doc = parse_document(text);
  if (!doc.is_object()) fail("document", "expected an object");
  check_keys(doc, "document", {"coefficients"});

  const Json& coeff = field(doc, "document", "coefficients");
  if (!coeff.is_array() || static_cast<int>(coeff.size()) != sys.group.order)
    fail("coefficients", "need one block function per group element");

  CPElement f = cp_zero(sys);
  for (int g = 0; g < sys.group.order; ++g) {
    const Json& row = coeff[g];
    if (!row.is_array() || static_cast<int>(row.size()) != sys.points)
      fail(at("coefficients", g), "need one matrix per point");
    for (int x = 0; x < sys.points; ++x)
      f.coeff[g].value[x] = matrix_value(row[x], at("coefficients", g, x), sys.fiber_dim);
  }
  return f;
}

CPElement load_element(const DynSystem& sys, const std::string& path) {
  return parse_element(sys, read_file(path));
}

std::string serialize_element(const DynSystem& sys, const CPElement& f) {
  return detail::element_json(sys, f).dump(2) + "\n";
}

namespace detail {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Json a_element_json(const DynSystem& sys, const AElement& a) {
  Json out = Json::array();
  for (int x = 0; x < sys.points; ++x) out.push_back(matrix_json(a.value[x]));
  return out;
}

Json element_json(const DynSystem& sys, const CPElement& f) {
  Json coeff = Json::array();
  for (int g = 0; g < sys.group.order; ++g) coeff.push_back(a_element_json(sys, f.coeff[g]));
  Json out;
  out["coefficients"] = coeff;
  return out;
}

Json system_json(const DynSystem& sys) {
  Json out;
  Json group;
  group["kind"] = "cayley";
  group["table"] = sys.group.cayley;
  out["group"] = group;
  out["points"] = sys.points;
  out["fiber_dim"] = sys.fiber_dim;
  Json action;
  action["kind"] = "table";
  action["table"] = sys.sigma;
  out["action"] = action;
  Json cocycle = Json::array();
  for (int g = 0; g < sys.group.order; ++g) {
    Json row = Json::array();
    for (int x = 0; x < sys.points; ++x) row.push_back(matrix_json(sys.cocycle[g][x]));
    cocycle.push_back(row);
  }
  out["cocycle"] = cocycle;
  out["z_partition"] = sys.blocks;
  Json tol;
  tol["rank_tol"] = sys.tol.rank_tol;
  tol["invert_tol"] = sys.tol.invert_tol;
  tol["norm_tol"] = sys.tol.norm_tol;
  out["tolerances"] = tol;
  return out;
}

namespace {

bool inline_array(const Json& j) {
  for (const auto& e : j) {
    if (e.is_array()) {
      if (!inline_array(e)) return false;
    } else if (!e.is_number() && !e.is_boolean()) {
      return false;
    }
  }
  return true;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  return j.dump();
}

void render_object(const Json& obj, int indent, std::string& out);
void render_array(const Json& arr, int indent, std::string& out);

void render_value_line(const std::string& head, const Json& v, int child_indent,
                       std::string& out) {
  if (v.is_object()) {
    if (v.empty()) {
      out += head + " {}\n";
    } else {
      out += head + "\n";
      render_object(v, child_indent, out);
    }
  } else if (v.is_array() && !inline_array(v)) {
    out += head + "\n";
    render_array(v, child_indent, out);
  } else if (v.is_array()) {
    out += head + " " + v.dump() + "\n";
  } else {
    out += head + " " + scalar_text(v) + "\n";
  }
}

void render_object(const Json& obj, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  for (auto it = obj.begin(); it != obj.end(); ++it)
    render_value_line(pad + it.key() + ":", it.value(), indent + 2, out);
}

void render_array(const Json& arr, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  for (const auto& e : arr) {
    if (e.is_object() && !e.empty()) {
      bool first = true;
      for (auto it = e.begin(); it != e.end(); ++it) {
        const std::string head = first ? pad + "- " + it.key() + ":"
                                       : pad + "  " + it.key() + ":";
        render_value_line(head, it.value(), indent + 4, out);
        first = false;
      }
    } else {
      render_value_line(pad + "-", e, indent + 2, out);
    }
  }
}

}  // namespace

std::string render_text(const Json& doc) {
  std::string out;
  render_object(doc, 0, out);
  return out;
}

}  // namespace detail

}  // namespace tl
