#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "limulrich/lim_ulrich.hpp"

namespace limulrich {

using ordered_json = nlohmann::ordered_json;

// Round-half-up 6-decimal rendering of an exact fraction, in integer
// arithmetic so every platform prints the same bytes.
inline std::string frac_decimal6(const Frac& f) {
  bool neg = (f.num < 0) != (f.den < 0) && f.num != 0;
  unsigned __int128 n = f.num < 0 ? -static_cast<__int128>(f.num) : f.num;
  unsigned __int128 d = f.den < 0 ? -static_cast<__int128>(f.den) : f.den;
  unsigned __int128 scaled = (n * 1000000 + d / 2) / d;
  unsigned long long whole = static_cast<unsigned long long>(scaled / 1000000);
  unsigned long long frac = static_cast<unsigned long long>(scaled % 1000000);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%llu.%06llu", neg ? "-" : "", whole, frac);
  return buf;
}

// CSV cell: exact fraction plus the decimal rendering, comma-free.
inline std::string frac_cell(const Frac& f) {
  return std::to_string(f.num) + "/" + std::to_string(f.den) + "=" + frac_decimal6(f);
}

inline ordered_json frac_json(const Frac& f) {
  return ordered_json{{"num", f.num}, {"den", f.den}, {"decimal", frac_decimal6(f)}};
}

inline std::string converge_csv(const std::vector<RowResult>& rows) {
  std::string out = "e,q,nu,mult,chi1,ratio_mult_nu,ratio_chi1_nu,predicted_mult,slice_dim_q1\n";
  for (const RowResult& rr : rows) {
    if (!rr.row) continue;  // failed rows go to stderr, not the table
    const ConvergenceRow& r = *rr.row;
    out += std::to_string(r.e) + "," + std::to_string(r.q) + "," + std::to_string(r.nu) + "," +
           std::to_string(r.mult) + "," + std::to_string(r.chi1) + "," +
           frac_cell(r.ratio_mult_nu) + "," + frac_cell(r.ratio_chi1_nu) + "," +
           std::to_string(r.predicted_mult) + "," + std::to_string(r.slice_dim_q1) + "\n";
  }
  return out;
}

inline ordered_json converge_json(const std::vector<RowResult>& rows) {
  ordered_json rows_json = ordered_json::array();
  ordered_json errors = ordered_json::array();
  for (const RowResult& rr : rows) {
    if (!rr.row) {
      errors.push_back(rr.error);
      continue;
    }
    const ConvergenceRow& r = *rr.row;
    ordered_json hl = ordered_json::array();
    for (long long v : r.homology_lengths) hl.push_back(v);
    rows_json.push_back(ordered_json{{"e", r.e},
                                     {"q", r.q},
                                     {"nu", r.nu},
                                     {"mult", r.mult},
                                     {"chi1", r.chi1},
                                     {"ratio_mult_nu", frac_json(r.ratio_mult_nu)},
                                     {"ratio_chi1_nu", frac_json(r.ratio_chi1_nu)},
                                     {"predicted_mult", r.predicted_mult},
                                     {"slice_dim_q1", r.slice_dim_q1},
                                     {"coker_length", r.coker_length},
                                     {"homology_lengths", hl}});
  }
  return ordered_json{{"rows", rows_json}, {"errors", errors}};
}

inline std::string residue_csv(const std::vector<ResidueReport>& rows, int d) {
  std::string out = "e,q,quotient_length,concentrated_dim,residue,residue_over_qpow\n";
  for (const ResidueReport& r : rows) {
    long long qpow = 1;
    for (int i = 0; i < d - 1; ++i) qpow *= r.q;
    Frac ratio = Frac::make(r.residue, qpow);
    out += std::to_string(r.e) + "," + std::to_string(r.q) + "," +
           std::to_string(r.quotient_length) + "," + std::to_string(r.concentrated_dim) + "," +
           std::to_string(r.residue) + "," + frac_cell(ratio) + "\n";
  }
  return out;
}

inline ordered_json residue_json(const std::vector<ResidueReport>& rows, int d) {
  ordered_json arr = ordered_json::array();
  for (const ResidueReport& r : rows) {
    long long qpow = 1;
    for (int i = 0; i < d - 1; ++i) qpow *= r.q;
    arr.push_back(ordered_json{{"e", r.e},
                               {"q", r.q},
                               {"quotient_length", r.quotient_length},
                               {"concentrated_dim", r.concentrated_dim},
                               {"residue", r.residue},
                               {"residue_over_qpow", frac_json(Frac::make(r.residue, qpow))}});
  }
  return ordered_json{{"rows", arr}};
}

inline ordered_json lech_json(const LechDemoReport& rep) {
  return ordered_json{{"e_R", rep.e_r},
                      {"e_S", rep.e_s},
                      {"holds", rep.holds},
                      {"seed_R", rep.seed_r},
                      {"seed_S", rep.seed_s}};
}

inline std::string lech_csv(const LechDemoReport& rep) {
  return "e_R,e_S,holds\n" + std::to_string(rep.e_r) + "," + std::to_string(rep.e_s) + "," +
         (rep.holds ? std::string("true") : std::string("false")) + "\n";
}

inline ordered_json prop24_json(const Prop24Report& rep) {
  auto side = [](const IdentityCheck& c) {
    return ordered_json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"equal", c.equal}};
  };
  return ordered_json{{"yz", side(rep.for_yz)},
                      {"y", side(rep.for_y)},
                      {"z", side(rep.for_z)},
                      {"all_equal", rep.all_equal()}};
}

inline std::string prop24_csv(const Prop24Report& rep) {
  std::string out = "identity,lhs,rhs,equal\n";
  auto row = [&](const char* name, const IdentityCheck& c) {
    out += std::string(name) + "," + std::to_string(c.lhs) + "," + std::to_string(c.rhs) + "," +
           (c.equal ? "true" : "false") + "\n";
  };
  row("yz", rep.for_yz);
  row("y", rep.for_y);
  row("z", rep.for_z);
  return out;
}

}  // namespace limulrich
