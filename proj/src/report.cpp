#include "tl/report.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "io_detail.hpp"
#include "tl/io.hpp"
#include "tl/linalg.hpp"
#include "tl/repr.hpp"
#include "tl/trajectories.hpp"

namespace tl {

namespace {

using detail::Json;

const char* kFreenessNote =
    "every singleton of the finite block space is open, so topological freeness of the block "
    "action reduces to the check that no element besides the identity fixes a block";

Json base_report(const char* command, const std::string& source, const DynSystem& sys) {
  Json out;
  out["command"] = command;
  out["input"] = source;
  out["digest"] = system_digest(sys);
  return out;
}

std::string finish(Json doc, std::vector<std::string> notes, const ReportOptions& opts) {
  notes.push_back(kFreenessNote);
  doc["notes"] = notes;
  return opts.json ? doc.dump(2) + "\n" : detail::render_text(doc);
}

Json witness_json(const DynSystem& sys, const CPElement& w) {
  Json out;
  out["coefficients"] = detail::element_json(sys, w)["coefficients"];
  out["universal_norm"] = universal_norm(sys, w);
  out["image_norm"] = operator_norm(phi(sys, w));
  return out;
}

// delta_e a - delta_g (a V_g(x)*) for the unit a at a sigma_g fixed point x:
// the rows of the image at x cancel while the identity coefficient survives.
CPElement fiber_cancellation(const DynSystem& sys, int g, int x) {
  AElement a = a_zero(sys);
  a.value[x] = Matrix::Identity(sys.fiber_dim, sys.fiber_dim);
  AElement c = a_zero(sys);
  c.value[x] = sys.cocycle[g][x].adjoint();
  return cp_delta(sys, sys.group.identity, a) - cp_delta(sys, g, c);
}

}  // namespace

std::string report_validate(const DynSystem& raw, const std::string& source,
                            const ReportOptions& opts) {
  const std::vector<std::string> issues = system_issues(raw);
  DynSystem checked;
  const bool valid = issues.empty();
  if (valid) checked = validate(raw);

  Json out = base_report("validate", source, valid ? checked : raw);
  Json shape;
  shape["group_order"] = raw.group.order;
  shape["points"] = raw.points;
  shape["fiber_dim"] = raw.fiber_dim;
  shape["blocks"] = raw.blocks.size();
  out["shape"] = shape;
  out["valid"] = valid;
  out["issues"] = issues;

  struct Category {
    const char* name;
    std::vector<const char*> needles;
  };
  const std::vector<Category> categories = {
      {"group law", {"multiplication table", "identity element", "inverse", "associativity",
                     "group order"}},
      {"sizes", {"point set", "fiber dimension", "tolerances"}},
      {"action", {"action", "acts nontrivially", "act bijectively"}},
      {"cocycle", {"cocycle"}},
      {"partition", {"block", "z-partition"}},
  };
  std::vector<bool> failed(categories.size(), false);
  for (const std::string& issue : issues)
    for (size_t c = 0; c < categories.size(); ++c) {
      bool hit = false;
      for (const char* needle : categories[c].needles)
        if (issue.find(needle) != std::string::npos) {
          hit = true;
          break;
        }
      if (hit) {
        failed[c] = true;
        break;
      }
    }
  Json checks = Json::array();
  for (size_t c = 0; c < categories.size(); ++c) {
    Json entry;
    entry["invariant"] = categories[c].name;
    entry["status"] = valid ? "pass" : (failed[c] ? "fail" : "not checked");
    checks.push_back(entry);
  }
  out["checks"] = checks;

  std::vector<std::string> notes;
  if (valid) {
    out["orbits"] = orbits(checked).orbits.size();
    out["free_block_action"] = check_A3(checked);
  } else {
    notes.push_back("defective systems skip the derived structure, so orbit data is omitted");
  }
  return finish(std::move(out), std::move(notes), opts);
}

std::string report_conditions(const DynSystem& sys, const std::string& source,
                              const ReportOptions& opts) {
  if (!sys.validated) throw precondition_error("report_conditions: system not validated");
  if (opts.samples < 0) throw precondition_error("report_conditions: samples must be nonnegative");
  if (sys.num_blocks() > 16)
    throw precondition_error("report_conditions: too many blocks to enumerate the open sets");

  Json out = base_report("conditions", source, sys);
  out["seed"] = opts.seed;
  out["samples"] = opts.samples;

  Json freeness;
  freeness["holds"] = check_A3(sys);
  Json fixed = Json::array();
  for (int g = 0; g < sys.group.order; ++g) {
    if (g == sys.group.identity) continue;
    const std::vector<int> fb = fixed_blocks(sys, g);
    if (fb.empty()) continue;
    Json entry;
    entry["element"] = g;
    entry["fixed_blocks"] = fb;
    fixed.push_back(entry);
  }
  freeness["fixed_block_witnesses"] = fixed;
  out["freeness"] = freeness;

  Rng rng(opts.seed);

  // Central comparisons against the identity coefficient of f* f, one
  // sweep per singleton open set.
  Json b1;
  int b1_cases = 0;
  int b1_holds = 0;
  Json b1_failures = Json::array();
  for (int m = 0; m < sys.num_blocks(); ++m) {
    for (int k = 0; k < opts.samples; ++k) {
      const CPElement f = random_cp(sys, rng);
      const CentralSearch r = check_B1(sys, f, {m});
      ++b1_cases;
      if (r.holds) {
        ++b1_holds;
      } else if (b1_failures.size() < 3) {
        Json entry;
        entry["block"] = m;
        entry["sample"] = k;
        entry["note"] = r.note;
        entry["coefficients"] = detail::element_json(sys, f)["coefficients"];
        b1_failures.push_back(entry);
      }
    }
  }
  b1["cases"] = b1_cases;
  b1["holds"] = b1_holds;
  b1["all_hold"] = b1_cases == b1_holds;
  b1["first_failures"] = b1_failures;
  out["b1_singletons"] = b1;

  // Localized comparisons on every open set whose blockwise fixing set is
  // nontrivial, with sampled coefficients on the fixing set plus the
  // structured fiber cancellations at action fixed points.
  Json b2;
  Json sets = Json::array();
  bool b2_all = true;
  const int nb = sys.num_blocks();
  for (int mask = 1; mask < (1 << nb); ++mask) {
    std::vector<int> v;
    for (int m = 0; m < nb; ++m)
      if (mask & (1 << m)) v.push_back(m);
    std::vector<int> d;
    for (int g = 0; g < sys.group.order; ++g) {
      bool fixes = true;
      for (int m : v)
        if (sys.beta(g, m) != m) {
          fixes = false;
          break;
        }
      if (fixes) d.push_back(g);
    }
    if (d.size() <= 1) continue;

    Json entry;
    entry["v"] = v;
    entry["fixing_set"] = d;
    Json first_failure;

    int sampled_holds = 0;
    for (int k = 0; k < opts.samples; ++k) {
      CPElement f = cp_zero(sys);
      for (int g : d) f.coeff[g] = random_a(sys, rng);
      const CentralSearch r = check_B2(sys, d, v, f);
      if (r.holds) {
        ++sampled_holds;
      } else if (first_failure.is_null()) {
        first_failure["kind"] = "sampled";
        first_failure["sample"] = k;
        first_failure["note"] = r.note;
        first_failure["coefficients"] = detail::element_json(sys, f)["coefficients"];
      }
    }
    entry["sampled_cases"] = opts.samples;
    entry["sampled_holds"] = sampled_holds;

    int structured_cases = 0;
    int structured_holds = 0;
    for (int g : d) {
      if (g == sys.group.identity) continue;
      for (int m : v)
        for (int x : sys.blocks[m]) {
          if (sys.act(g, x) != x) continue;
          const CPElement f = fiber_cancellation(sys, g, x);
          const CentralSearch r = check_B2(sys, d, v, f);
          ++structured_cases;
          if (r.holds) {
            ++structured_holds;
          } else if (first_failure.is_null()) {
            first_failure["kind"] = "structured";
            first_failure["element"] = g;
            first_failure["point"] = x;
            first_failure["note"] = r.note;
            first_failure["coefficients"] = detail::element_json(sys, f)["coefficients"];
          }
        }
    }
    entry["structured_cases"] = structured_cases;
    entry["structured_holds"] = structured_holds;
    entry["first_failure"] = first_failure;
    if (sampled_holds != opts.samples || structured_holds != structured_cases) b2_all = false;
    sets.push_back(entry);
  }
  b2["open_sets"] = sets;
  b2["all_hold"] = b2_all;
  if (sets.empty())
    b2["note"] = "no open set has a nontrivial blockwise fixing set, so the sweep is empty";
  out["b2_fixed_sets"] = b2;

  std::vector<std::string> notes = {
      "a failed search refutes only the indicator family of central elements, and a clean sweep "
      "is sampled evidence rather than a proof"};
  return finish(std::move(out), std::move(notes), opts);
}

std::string report_isom(const DynSystem& sys, const std::string& source,
                        const ReportOptions& opts) {
  if (!sys.validated) throw precondition_error("report_isom: system not validated");
  Json out = base_report("isom", source, sys);

  const IsoReport pr = phi_iso_check(sys);
  Json coeff;
  coeff["domain_dim"] = pr.expected_dim;
  coeff["achieved_rank"] = pr.achieved_rank;
  coeff["iso"] = pr.iso;
  coeff["kernel_dim"] = pr.kernel.size();
  if (pr.witness) coeff["witness"] = witness_json(sys, *pr.witness);
  out["coefficient_map"] = coeff;

  const IsoReport sr = check_pi_side_iso(sys);
  Json orbit;
  orbit["domain_dim"] = sr.expected_dim;
  orbit["achieved_rank"] = sr.achieved_rank;
  orbit["iso"] = sr.iso;
  orbit["kernel_dim"] = sr.kernel.size();
  out["orbit_map"] = orbit;

  std::vector<std::string> notes = {
      "a kernel witness has unit identity coefficient, positive universal norm and numerically "
      "zero image, which settles the injectivity question in the negative"};
  return finish(std::move(out), std::move(notes), opts);
}

std::string report_invert(const DynSystem& sys, const CPElement& f, const std::string& source,
                          const std::string& element_source, const ReportOptions& opts) {
  if (!sys.validated) throw precondition_error("report_invert: system not validated");
  Json out = base_report("invert", source, sys);
  out["element"] = element_source;

  const InvertVerdict v = invertibility_by_trajectories(sys, f);
  Json per = Json::array();
  for (const OrbitInvertibility& o : v.per_orbit) {
    Json entry;
    entry["orbit"] = o.orbit_index;
    entry["min_singular"] = o.min_sing;
    entry["norm"] = o.norm;
    entry["invertible"] = o.invertible;
    entry["inverse_norm"] = o.inverse_norm;
    per.push_back(entry);
  }
  out["per_orbit"] = per;
  out["invertible"] = v.invertible;
  out["max_inverse_norm"] = v.max_inverse_norm;
  Json direct;
  direct["min_singular"] = v.phi_min_sing;
  direct["norm"] = v.phi_norm;
  direct["invertible"] = v.phi_invertible;
  out["direct_check"] = direct;
  out["coefficient_map_injective"] = v.phi_iso;
  out["agreement"] = v.agreement;

  std::vector<std::string> notes = {
      "the element is invertible exactly when every orbit representation of it is, and the "
      "direct check on the image is conclusive only when the coefficient map is injective"};
  return finish(std::move(out), std::move(notes), opts);
}

std::string report_norms(const DynSystem& sys, const CPElement& f, const std::string& source,
                         const std::string& element_source, const ReportOptions& opts) {
  if (!sys.validated) throw precondition_error("report_norms: system not validated");
  Json out = base_report("norms", source, sys);
  out["element"] = element_source;

  const double universal = universal_norm(sys, f);
  Json per = Json::array();
  double max_orbit = 0.0;
  for (const OrbitRep& rep : orbit_reps(sys)) {
    const double n = operator_norm(pi_omega(sys, rep, f));
    Json entry;
    entry["orbit"] = rep.orbit_index;
    entry["dimension"] = sys.group.order * rep.d;
    entry["norm"] = n;
    per.push_back(entry);
    max_orbit = std::max(max_orbit, n);
  }
  out["universal_norm"] = universal;
  out["per_orbit"] = per;
  out["max_orbit_norm"] = max_orbit;
  out["difference"] = std::abs(universal - max_orbit);
  out["image_norm"] = operator_norm(phi(sys, f));

  std::vector<std::string> notes = {
      "the largest orbit representation norm computes the universal norm, while the image norm "
      "can drop below it when the coefficient map is not injective"};
  return finish(std::move(out), std::move(notes), opts);
}

namespace {

Json family_verdict_json(const DynSystem& sys, const FamilyVerdict& v) {
  Json out;
  out["faithful"] = v.faithful;
  out["strictly_norming"] = v.strictly_norming;
  out["exhaustive"] = v.exhaustive;
  out["sufficient"] = v.sufficient;
  out["norming_gap"] = v.norming_gap;
  if (v.uncovered_block)
    out["uncovered_block"] = *v.uncovered_block;
  else
    out["uncovered_block"] = nullptr;
  if (v.faithful_witness) out["faithful_witness"] = witness_json(sys, *v.faithful_witness);
  if (v.norming_witness) out["norming_witness"] = witness_json(sys, *v.norming_witness);
  if (v.transfer_witness) out["transfer_witness"] = witness_json(sys, *v.transfer_witness);
  out["note"] = v.note;
  return out;
}

Json block_table_json(const WedderburnData& wd) {
  Json out;
  out["span_rank"] = wd.span_rank;
  out["dimensions"] = wd.block_dims;
  return out;
}

}  // namespace

std::string report_family(const DynSystem& sys, const std::string& source,
                          const ReportOptions& opts) {
  if (!sys.validated) throw precondition_error("report_family: system not validated");
  Json out = base_report("family", source, sys);
  out["seed"] = opts.seed;

  const std::vector<OrbitRep> reps = orbit_reps(sys);
  std::vector<LinearRep> family;
  Json members = Json::array();
  for (const OrbitRep& rep : reps) {
    family.push_back(rep_from_orbit(sys, rep));
    Json entry;
    entry["orbit"] = rep.orbit_index;
    entry["blocks"] = rep.orbit;
    entry["dimension"] = sys.group.order * rep.d;
    entry["name"] = family.back().name;
    members.push_back(entry);
  }
  out["family"] = members;

  FamilyOptions fo;
  fo.seed = opts.seed;
  out["norming_samples"] = fo.norming_samples;
  out["transfer_samples"] = fo.transfer_samples;

  const Target crossed = crossed_product_target(sys);
  Json cp = family_verdict_json(sys, family_verdicts(sys, family, crossed, fo));
  cp["blocks"] = block_table_json(wedderburn(crossed.span, sys.tol));
  out["crossed_product"] = cp;

  if (phi_iso_check(sys).iso) {
    const Target image = image_algebra_target(sys);
    Json im = family_verdict_json(sys, family_verdicts(sys, family, image, fo));
    im["blocks"] = block_table_json(wedderburn(image.span, sys.tol));
    out["image_model"] = im;
  } else {
    Json im;
    im["skipped"] = true;
    im["note"] =
        "the coefficient map is not injective, so the image of the defining representation is "
        "not a faithful model of the coefficient algebra";
    out["image_model"] = im;
  }

  Json closure = Json::array();
  for (const OrbitRep& rep : reps) {
    const OrbitClosureCheck check = karideals_check(sys, rep);
    Json entry;
    entry["orbit"] = rep.orbit_index;
    entry["holds"] = check.holds;
    entry["note"] = check.note;
    closure.push_back(entry);
  }
  out["orbit_closure"] = closure;

  std::vector<std::string> notes = {
      "the sampled invertibility transfer is heuristic evidence while the block covering "
      "criterion is exact, so the sufficiency verdict rests on the latter"};
  return finish(std::move(out), std::move(notes), opts);
}

std::string report_witness(const DynSystem& sys, const std::string& source,
                           const ReportOptions& opts) {
  if (!sys.validated) throw precondition_error("report_witness: system not validated");
  Json out = base_report("witness", source, sys);
  out["seed"] = opts.seed;
  out["samples"] = opts.samples;

  const IsoReport pr = phi_iso_check(sys);
  out["coefficient_map_injective"] = pr.iso;
  if (pr.witness)
    out["kernel_witness"] = witness_json(sys, *pr.witness);
  else
    out["kernel_witness"] = nullptr;

  // The structured probe only applies to scalar fibers over singleton
  // blocks; elsewhere the kernel witness above still stands and the probe
  // section records why it was skipped.
  Json probe;
  try {
    const MultProbeResult mp = nontrivial_mult_probe(sys, opts.samples, opts.seed);
    probe["found"] = mp.found;
    probe["trials"] = opts.samples;
    if (mp.found) {
      probe["left_factor"] = detail::a_element_json(sys, mp.a);
      Json coeffs = Json::array();
      for (const Complex& c : mp.b_coeff) coeffs.push_back(Json::array({c.real(), c.imag()}));
      probe["right_factor_coefficients"] = coeffs;
    }
    probe["note"] = mp.note;
  } catch (const unsupported_operation& ex) {
    probe["found"] = false;
    probe["trials"] = opts.samples;
    probe["note"] = std::string("probe skipped: ") + ex.what();
  }
  out["zero_divisor_probe"] = probe;

  std::vector<std::string> notes = {
      "a kernel witness settles injectivity in the negative, while an empty probe only reports "
      "that the structured and sampled searches found nothing"};
  return finish(std::move(out), std::move(notes), opts);
}

}  // namespace tl
