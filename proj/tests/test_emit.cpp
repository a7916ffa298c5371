#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "limulrich/emit.hpp"
#include "limulrich/parse.hpp"

using namespace limulrich;

namespace {

// Minimal JSON-schema checker covering the subset our schemas use:
// type, required, properties, items, $ref into #/definitions.
bool validates(const ordered_json& schema, const ordered_json& value, const ordered_json& root);

bool check_type(const std::string& type, const ordered_json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "number") return value.is_number();
  return false;
}

bool validates(const ordered_json& schema, const ordered_json& value, const ordered_json& root) {
  if (schema.contains("$ref")) {
    std::string ref = schema["$ref"];
    const std::string prefix = "#/definitions/";
    REQUIRE(ref.rfind(prefix, 0) == 0);
    return validates(root["definitions"][ref.substr(prefix.size())], value, root);
  }
  if (schema.contains("type") && !check_type(schema["type"], value)) return false;
  if (schema.contains("required"))
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>())) return false;
  if (schema.contains("properties"))
    for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
      if (value.contains(it.key()) && !validates(it.value(), value[it.key()], root)) return false;
  if (schema.contains("items") && value.is_array())
    for (const auto& item : value)
      if (!validates(schema["items"], item, root)) return false;
  return true;
}

ordered_json load_schema(const std::string& name) {
  std::ifstream in(std::string(LIMULRICH_SOURCE_DIR) + "/schemas/" + name);
  REQUIRE(in.good());
  return ordered_json::parse(in);
}

std::vector<RowResult> sample_rows() {
  ConvergenceRow r;
  r.e = 1;
  r.q = 5;
  r.nu = 110;
  r.mult = 150;
  r.chi1 = 10;
  r.predicted_mult = 150;
  r.slice_dim_q1 = 110;
  r.coker_length = 160;
  r.homology_lengths = {160, 10, 0, 0};
  r.ratio_mult_nu = Frac::make(150, 110);
  r.ratio_chi1_nu = Frac::make(10, 110);
  RowResult ok{r, ""};
  RowResult bad{std::nullopt, "window too small"};
  return {ok, bad};
}

}  // namespace

TEST_CASE("fraction rendering is exact and deterministic") {
  CHECK(frac_cell(Frac::make(150, 110)) == "15/11=1.363636");
  CHECK(frac_cell(Frac::make(0, 7)) == "0/1=0.000000");
  CHECK(frac_cell(Frac::make(1, 1)) == "1/1=1.000000");
  CHECK(frac_decimal6(Frac::make(1, 3)) == "0.333333");
  CHECK(frac_decimal6(Frac::make(2, 3)) == "0.666667");  // round half up
  CHECK(frac_decimal6(Frac::make(-1, 2)) == "-0.500000");
}

TEST_CASE("converge CSV has the pinned header and skips failed rows") {
  std::string csv = converge_csv(sample_rows());
  std::istringstream ss(csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "e,q,nu,mult,chi1,ratio_mult_nu,ratio_chi1_nu,predicted_mult,slice_dim_q1");
  std::string row;
  std::getline(ss, row);
  CHECK(row == "1,5,110,150,10,15/11=1.363636,1/11=0.090909,150,110");
  CHECK_FALSE(std::getline(ss, row));  // the failed row is not in the table
}

TEST_CASE("converge JSON validates against the shipped schema") {
  ordered_json out = converge_json(sample_rows());
  CHECK(validates(load_schema("converge.schema.json"), out, load_schema("converge.schema.json")));
  CHECK(out["errors"].size() == 1);
}

TEST_CASE("residue and lech emissions validate") {
  ResidueReport rr;
  rr.e = 1;
  rr.q = 3;
  rr.quotient_length = 12;
  rr.concentrated_dim = 10;
  rr.residue = 2;
  ordered_json rj = residue_json({rr}, 3);
  auto rschema = load_schema("residue.schema.json");
  CHECK(validates(rschema, rj, rschema));

  LechDemoReport lr;
  lr.e_r = 1;
  lr.e_s = 2;
  lr.holds = true;
  auto lschema = load_schema("lech.schema.json");
  CHECK(validates(lschema, lech_json(lr), lschema));
  CHECK(lech_csv(lr) == "e_R,e_S,holds\n1,2,true\n");
}

TEST_CASE("prop24 emission validates") {
  Prop24Report rep;
  rep.for_yz = {0, 0, true};
  rep.for_y = {1, 1, true};
  rep.for_z = {2, 2, true};
  auto schema = load_schema("prop24.schema.json");
  CHECK(validates(schema, prop24_json(rep), schema));
  CHECK(prop24_csv(rep).rfind("identity,lhs,rhs,equal\n", 0) == 0);
}

TEST_CASE("emission is byte-stable across repeated calls") {
  auto rows = sample_rows();
  CHECK(converge_csv(rows) == converge_csv(rows));
  CHECK(converge_json(rows).dump(2) == converge_json(rows).dump(2));
}
