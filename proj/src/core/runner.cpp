#include "core/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <future>
#include <sstream>

#include "core/errors.hpp"

namespace superkilling {

namespace {

SamplingOptions sampling_for(const RunOptions& run, std::size_t directive_idx) {
  SamplingOptions s;
  s.seed = run.seed + directive_idx;
  s.samples = run.samples;
  s.tolerance = run.tolerance;
  s.cross_check = true;
  return s;
}

std::string verdict_of(bool zero, Method method) {
  if (!zero) return "fail";
  return method == Method::Numeric ? "numeric-pass" : "pass";
}

void note_value(CheckResult& r, const std::string& label,
                const SuperFunction& v) {
  r.notes.push_back(label + " = " + v.to_string());
}

/// Compare a computed value against an optional expected expression.
void apply_expected(CheckResult& r, const Directive& d,
                    const SuperFunction& value, const SamplingOptions& opts) {
  if (!d.expected_value) return;
  SuperFunction delta = value - d.expected_value->on_chart(value.chart());
  ZeroCheck z = check_zero(delta, opts);
  if (z.verdict != Verdict::Zero) {
    r.verdict = "fail";
    r.witnesses.push_back("value differs from the expected expression: " +
                          z.witness);
  } else if (r.verdict == "pass" && z.method == Method::Numeric) {
    r.verdict = "numeric-pass";
  }
}

void from_component_verdicts(CheckResult& r, const ComponentVerdicts& v) {
  r.verdict = verdict_of(v.all_zero, v.method);
  for (const auto& w : v.witnesses) r.witnesses.push_back(w);
}

CheckResult execute(const Document& doc, const Directive& d,
                    const SamplingOptions& opts) {
  CheckResult r;
  r.display = d.display;
  r.line = d.line;
  switch (d.expect) {
    case Directive::Expect::Pass: r.expected = "pass"; break;
    case Directive::Expect::Fail: r.expected = "fail"; break;
    case Directive::Expect::Error: r.expected = "error"; break;
  }
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (d.kind) {
      case Directive::Kind::Homological: {
        const VectorField& q = *doc.find_vector(d.args[0]);
        from_component_verdicts(r, is_homological(q, opts));
        break;
      }
      case Directive::Kind::Killing: {
        const MetricTensor& g = *doc.find_metric(d.args[0]);
        const VectorField& x = *doc.find_vector(d.args[1]);
        from_component_verdicts(r, is_killing(g, x, opts));
        break;
      }
      case Directive::Kind::RiemannianQ: {
        const MetricTensor& g = *doc.find_metric(d.args[0]);
        const VectorField& q = *doc.find_vector(d.args[1]);
        ComponentVerdicts hom = is_homological(q, opts);
        ComponentVerdicts kil = is_killing(g, q, opts);
        ComponentVerdicts both = hom;
        both.all_zero = hom.all_zero && kil.all_zero;
        if (kil.method == Method::Numeric) both.method = Method::Numeric;
        for (const auto& w : kil.witnesses) both.witnesses.push_back(w);
        from_component_verdicts(r, both);
        break;
      }
      case Directive::Kind::Divergence: {
        const BerezinVolume& rho = *doc.find_volume(d.args[0]);
        const VectorField& x = *doc.find_vector(d.args[1]);
        SuperFunction div = divergence(rho, x);
        note_value(r, "Div", div);
        r.verdict = "pass";
        apply_expected(r, d, div, opts);
        break;
      }
      case Directive::Kind::Modular: {
        const BerezinVolume& rho = *doc.find_volume(d.args[0]);
        const VectorField& q = *doc.find_vector(d.args[1]);
        DivergenceReport rep = modular_representative(rho, q, opts);
        note_value(r, "modular representative", rep.value);
        bool qc = rep.q_closed && rep.q_closed->verdict == Verdict::Zero;
        Method m = rep.q_closed ? rep.q_closed->method : Method::Symbolic;
        r.verdict = verdict_of(qc, m);
        if (!qc)
          r.witnesses.push_back("Q(Div_rho Q) != 0: " + rep.q_closed->witness);
        apply_expected(r, d, rep.value, opts);
        break;
      }
      case Directive::Kind::Unimodular: {
        const MetricTensor& g = *doc.find_metric(d.args[0]);
        const VectorField& q = *doc.find_vector(d.args[1]);
        UnimodularCertificate cert = certify_unimodular(g, q, opts);
        Method m = Method::Symbolic;
        if (cert.homological.method == Method::Numeric ||
            cert.killing.method == Method::Numeric)
          m = Method::Numeric;
        if (cert.divergence_zero && cert.divergence_zero->method == Method::Numeric)
          m = Method::Numeric;
        r.verdict = verdict_of(cert.pass(), m);
        for (const auto& w : cert.homological.witnesses)
          r.witnesses.push_back("homological: " + w);
        for (const auto& w : cert.killing.witnesses)
          r.witnesses.push_back("killing: " + w);
        if (cert.volume) {
          r.notes.push_back("certificate: canonical volume density rho = " +
                            cert.volume->density().to_string());
          if (cert.divergence_zero &&
              cert.divergence_zero->verdict != Verdict::Zero)
            r.witnesses.push_back("Div_dV Q != 0: " +
                                  cert.divergence_zero->witness);
          if (cert.density_level_zero &&
              cert.density_level_zero->verdict != Verdict::Zero)
            r.witnesses.push_back("d_a(Q^a rho) != 0: " +
                                  cert.density_level_zero->witness);
        }
        break;
      }
      case Directive::Kind::Shander: {
        const MetricTensor& g = *doc.find_metric(d.args[0]);
        std::size_t tau = *g.chart()->index_of(d.args[1]);
        ShanderReport rep = check_killing_shander(g, tau, opts);
        // The reduced equation must agree with the full Killing check for
        // the coordinate field; a mismatch is an internal inconsistency.
        ComponentVerdicts full = is_killing(
            g, VectorField::coordinate(g.chart(), tau), opts);
        if (full.all_zero != rep.reduced_killing.all_zero)
          throw DisagreementError(
              "reduced Killing equation disagrees with L_X g = 0");
        from_component_verdicts(r, rep.reduced_killing);
        r.notes.push_back(std::string("g_{tau,tau} = 0: ") +
                          (rep.tautau_zero ? "holds" : "VIOLATED"));
        if (!rep.tautau_zero) r.verdict = "fail";
        for (const auto& s : rep.odd_one_form)
          r.notes.push_back("split form, " + s);
        break;
      }
      case Directive::Kind::Morphism: {
        const MetricTensor& g1 = *doc.find_metric(d.args[0]);
        const VectorField& q1 = *doc.find_vector(d.args[1]);
        const MetricTensor& g2 = *doc.find_metric(d.args[2]);
        const VectorField& q2 = *doc.find_vector(d.args[3]);
        const CoordinateChange& phi = *doc.find_change(d.args[4]);
        MorphismVerdict v = check_rq_morphism(g1, q1, g2, q2, phi, opts);
        Method m = v.metric_condition.method;
        if (v.field_condition.method == Method::Numeric) m = Method::Numeric;
        r.verdict = verdict_of(v.pass(), m);
        for (const auto& w : v.metric_condition.witnesses)
          r.witnesses.push_back("metric condition: " + w);
        for (const auto& w : v.field_condition.witnesses)
          r.witnesses.push_back("field condition: " + w);
        break;
      }
      case Directive::Kind::LiealgKilling: {
        const LieAlgebraData& l = *doc.find_liealg(d.args[0]);
        AlgebraicVerdict v = check_algebraic_killing(l);
        r.verdict = v.pass ? "pass" : "fail";
        r.witnesses = v.witnesses;
        // Cross-check against the geometric route.
        OddRealization odd = build_homological(l);
        ComponentVerdicts geo =
            is_killing(form_metric(l, odd.chart), odd.field, opts);
        if (geo.all_zero != v.pass)
          throw DisagreementError("algebraic Killing condition disagrees "
                                  "with the geometric Killing check");
        break;
      }
      case Directive::Kind::LiealgTrace: {
        const LieAlgebraData& l = *doc.find_liealg(d.args[0]);
        AlgebraicVerdict v = check_unimodular_trace(l);
        r.verdict = v.pass ? "pass" : "fail";
        r.witnesses = v.witnesses;
        break;
      }
    }
  } catch (const DisagreementError& e) {
    r.verdict = "error";
    r.internal_error = true;
    r.witnesses.push_back(std::string("internal disagreement: ") + e.what());
  } catch (const Error& e) {
    r.verdict = "error";
    r.witnesses.push_back(e.what());
  }
  auto t1 = std::chrono::steady_clock::now();
  r.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  std::string actual = r.verdict == "numeric-pass" ? "pass" : r.verdict;
  r.ok = !r.internal_error && actual == r.expected;
  return r;
}

}  // namespace

int Report::exit_code() const {
  bool any_fail = false;
  for (const CheckResult& r : results) {
    if (r.internal_error) return 3;
    if (!r.ok) any_fail = true;
  }
  return any_fail ? 1 : 0;
}

std::string Report::to_text() const {
  std::ostringstream out;
  if (!source_name.empty()) out << "== " << source_name << " ==\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CheckResult& r = results[i];
    out << (r.ok ? "[ ok ]" : "[FAIL]") << " " << r.display << ": "
        << r.verdict;
    if (r.expected != "pass") out << " (expected " << r.expected << ")";
    out << "  [" << static_cast<int>(r.ms) << " ms]\n";
    for (const auto& n : r.notes) out << "       " << n << "\n";
    for (const auto& w : r.witnesses) out << "       witness: " << w << "\n";
  }
  int pass = 0;
  for (const CheckResult& r : results) pass += r.ok;
  out << pass << "/" << results.size() << " checks in the expected state"
      << "; exit code " << exit_code() << "\n";
  return out.str();
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["source"] = source_name;
  j["seed"] = options.seed;
  j["samples"] = options.samples;
  j["tolerance"] = options.tolerance;
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& r : results) {
    nlohmann::json c;
    c["directive"] = r.display;
    c["line"] = r.line;
    c["verdict"] = r.verdict;
    c["expected"] = r.expected;
    c["ok"] = r.ok;
    c["witnesses"] = r.witnesses;
    c["notes"] = r.notes;
    c["ms"] = r.ms;
    j["checks"].push_back(std::move(c));
  }
  j["exit_code"] = exit_code();
  return j.dump(2);
}

Report run_checks(const Document& doc, const RunOptions& options,
                  const std::string& source_name) {
  Report rep;
  rep.source_name = source_name;
  rep.options = options;
  rep.results.resize(doc.checks.size());
  if (options.parallel) {
    std::vector<std::future<CheckResult>> futs;
    futs.reserve(doc.checks.size());
    for (std::size_t i = 0; i < doc.checks.size(); ++i)
      futs.push_back(std::async(std::launch::async, [&, i] {
        return execute(doc, doc.checks[i], sampling_for(options, i));
      }));
    for (std::size_t i = 0; i < futs.size(); ++i)
      rep.results[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < doc.checks.size(); ++i)
      rep.results[i] = execute(doc, doc.checks[i], sampling_for(options, i));
  }
  return rep;
}

Report run_liealg(const LieAlgebraData& data, const RunOptions& options,
                  const std::string& source_name) {
  Report rep;
  rep.source_name = source_name;
  rep.options = options;
  SamplingOptions opts = sampling_for(options, 0);

  CheckResult jacobi;
  jacobi.display = "jacobi (Q^2 = 0)";
  jacobi.expected = "pass";
  auto t0 = std::chrono::steady_clock::now();
  try {
    OddRealization odd = build_homological(data);
    ComponentVerdicts hom = is_homological(odd.field, opts);
    AlgebraicVerdict brute = check_jacobi(data);
    if (hom.all_zero != brute.pass)
      throw DisagreementError("Q^2 = 0 disagrees with the brute-force "
                              "Jacobi check");
    from_component_verdicts(jacobi, hom);
    jacobi.ok = hom.all_zero;
  } catch (const DisagreementError& e) {
    jacobi.verdict = "error";
    jacobi.internal_error = true;
    jacobi.witnesses.push_back(e.what());
  } catch (const Error& e) {
    jacobi.verdict = "error";
    jacobi.witnesses.push_back(e.what());
  }
  jacobi.ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  rep.results.push_back(jacobi);

  Document scratch;
  scratch.liealgs.emplace_back("L", data);
  for (Directive::Kind k :
       {Directive::Kind::LiealgKilling, Directive::Kind::LiealgTrace}) {
    Directive d;
    d.kind = k;
    d.args = {"L"};
    d.display = std::string(directive_name(k)) + "(L)";
    rep.results.push_back(execute(scratch, d, opts));
  }
  return rep;
}

}  // namespace superkilling
