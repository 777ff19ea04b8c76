#include "commands.hpp"

#include <cstdio>
#include <sstream>

namespace finsler::app {

namespace {

std::string describe(const SpaceSpec& spec) {
  std::string s(family_name(spec.family()));
  if (spec.family() == Family::GeneralizedSquare || spec.family() == Family::GeneralizedKropina) {
    s += " k=" + std::to_string(spec.exponent());
  }
  return s + ", dim " + std::to_string(spec.dim());
}

std::string vector_text(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s + ")";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

class TensorRows {
 public:
  explicit TensorRows(std::ostringstream& out) : out_(out) {}

  void scalar(const std::string& ctx, const char* name, double v) { row(ctx, name, "", "", "", v); }
  void vector(const std::string& ctx, const char* name, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) row(ctx, name, idx(i), "", "", v[i]);
  }
  void matrix(const std::string& ctx, const char* name, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) row(ctx, name, idx(i), idx(j), "", m(i, j));
    }
  }
  void tensor(const std::string& ctx, const char* name, const Tensor3& t) {
    for (std::size_t i = 0; i < t.dim(); ++i) {
      for (std::size_t j = 0; j < t.dim(); ++j) {
        for (std::size_t k = 0; k < t.dim(); ++k) row(ctx, name, idx(i), idx(j), idx(k), t(i, j, k));
      }
    }
  }

 private:
  template <class I>
  static std::string idx(I i) {
    return std::to_string(static_cast<long long>(i) + 1);
  }
  void row(const std::string& ctx, const char* q, const std::string& i, const std::string& j, const std::string& k,
           double v) {
    out_ << ctx << ',' << q << ',' << i << ',' << j << ',' << k << ',' << format_number(v) << '\n';
  }
  std::ostringstream& out_;
};

void matrix_text(std::ostringstream& out, const char* name, const Matrix& m) {
  out << "  " << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) out << "    " << vector_text(m.row(i).transpose()) << '\n';
}

RunOutput run_tensors(const RunConfig& cfg) {
  const SpaceSpec& spec = *cfg.space;
  if (cfg.flags.empty()) throw Error("tensors: the [tensors] section lists no flag");
  RunOutput r;
  std::ostringstream text, csv;
  csv << "# seed=none\n" << "context,quantity,i,j,k,value\n";
  TensorRows rows(csv);
  text << "tensors: " << describe(spec) << '\n';
  for (std::size_t n = 0; n < cfg.flags.size(); ++n) {
    const FlagInput& in = cfg.flags[n];
    const std::string ctx = "flag" + std::to_string(n);
    text << "\n" << ctx << ": x = " << vector_text(in.x) << ", y = " << vector_text(in.y) << '\n';
    const ValidityReport v = validity_check(spec, in.x, in.y);
    const FlagPoint f = make_flag(spec, in.x, in.y);
    text << "  alpha = " << format_number(f.alpha) << ", beta = " << format_number(f.beta) << '\n';
    rows.scalar(ctx, "alpha", f.alpha);
    rows.scalar(ctx, "beta", f.beta);
    if (!v.ok()) {
      text << "  validity: FAIL (" << v.note << ")\n";
      r.status = 1;
      continue;
    }
    const TensorBundle t = compute_bundle(spec, f);
    text << "  validity: ok\n";
    text << "  F = " << format_number(t.F) << '\n';
    text << "  p = " << format_number(t.metric.p) << ", p0 = " << format_number(t.metric.p0)
         << ", p1 = " << format_number(t.metric.p1) << ", p2 = " << format_number(t.metric.p2) << '\n';
    text << "  q0 = " << format_number(t.angular.q0) << ", q1 = " << format_number(t.angular.q1)
         << ", q2 = " << format_number(t.angular.q2) << '\n';
    text << "  zeta = " << format_number(t.reciprocal.zeta) << ", s0 = " << format_number(t.reciprocal.s0)
         << ", s1 = " << format_number(t.reciprocal.s1) << ", s2 = " << format_number(t.reciprocal.s2) << '\n';
    text << "  gamma1 = " << format_number(t.gamma1) << '\n';
    text << "  l = " << vector_text(t.l) << '\n';
    text << "  m = " << vector_text(t.m) << '\n';
    matrix_text(text, "g", t.g);
    matrix_text(text, "g_inv", t.g_inv);
    matrix_text(text, "h", t.h);
    text << "  C nonzero entries:\n";
    for (std::size_t i = 0; i < t.C.dim(); ++i) {
      for (std::size_t j = i; j < t.C.dim(); ++j) {
        for (std::size_t k = j; k < t.C.dim(); ++k) {
          if (t.C(i, j, k) != 0.0) {
            text << "    C_" << i + 1 << j + 1 << k + 1 << " = " << format_number(t.C(i, j, k)) << '\n';
          }
        }
      }
    }
    rows.scalar(ctx, "F", t.F);
    for (auto [name, value] : {std::pair{"p", t.metric.p}, {"p0", t.metric.p0}, {"p1", t.metric.p1},
                               {"p2", t.metric.p2}, {"q0", t.angular.q0}, {"q1", t.angular.q1},
                               {"q2", t.angular.q2}, {"zeta", t.reciprocal.zeta}, {"s0", t.reciprocal.s0},
                               {"s1", t.reciprocal.s1}, {"s2", t.reciprocal.s2}, {"gamma1", t.gamma1}}) {
      rows.scalar(ctx, name, value);
    }
    rows.vector(ctx, "l", t.l);
    rows.vector(ctx, "m", t.m);
    rows.matrix(ctx, "g", t.g);
    rows.matrix(ctx, "g_inv", t.g_inv);
    rows.matrix(ctx, "h", t.h);
    rows.tensor(ctx, "C", t.C);
  }
  r.text = text.str();
  r.csv = csv.str();
  return r;
}

RunOutput run_audit(const RunConfig& cfg) {
  const SpaceSpec& spec = *cfg.space;
  const AuditReport rep = audit_sweep(spec, sample_flags(spec, cfg.audit_flags, cfg.audit_seed), cfg.audit);
  RunOutput r;
  r.status = rep.passed() ? 0 : 1;
  std::ostringstream text, csv;
  text << "audit: " << describe(spec) << ", " << cfg.audit_flags << " flags, seed " << cfg.audit_seed << '\n';
  csv << "# seed=" << cfg.audit_seed << '\n' << "check,max_rel_error,tolerance,status,note\n";
  for (const AuditRow& row : rep.rows) {
    char err[32] = "-";
    char tol[32] = "-";
    if (row.status != AuditStatus::NotApplicable) {
      std::snprintf(err, sizeof err, "%.3e", row.max_rel_error);
      std::snprintf(tol, sizeof tol, "%.0e", row.tolerance);
    }
    char line[200];
    std::snprintf(line, sizeof line, "  %-56s %-10s %-6s %s", row.check.c_str(), err, tol,
                  std::string(audit_status_name(row.status)).c_str());
    text << line;
    if (!row.note.empty()) text << "  (" << row.note << ')';
    text << '\n';
    csv << csv_field(row.check) << ',' << format_number(row.max_rel_error) << ',' << format_number(row.tolerance)
        << ',' << audit_status_name(row.status) << ',' << csv_field(row.note) << '\n';
  }
  const std::size_t expected = rep.count(AuditStatus::ExpectedFail);
  text << "result: " << (rep.passed() ? "PASS" : "FAIL");
  if (expected > 0) text << " (" << expected << " expected discrepancy, informational)";
  text << '\n';
  r.text = text.str();
  r.csv = csv.str();
  return r;
}

RunOutput run_classify(const RunConfig& cfg) {
  const SpaceSpec& spec = *cfg.space;
  if (!cfg.surface) throw Error("classify: the configuration has no [hypersurface] section");
  const ClassificationReport rep = classify(spec, *cfg.surface, cfg.classify);
  RunOutput r;
  r.status = rep.consistent() ? 0 : 1;
  std::ostringstream text, csv;
  const ClassifyOptions& o = rep.options;
  text << "classify: " << describe(spec) << ", surface " << cfg.surface->potential().str() << " = "
       << format_number(cfg.surface->level()) << '\n';
  text << "  samples: " << o.points << " points x " << o.directions << " directions, seed " << o.seed << ", tol "
       << format_number(o.tol) << '\n';
  auto mark = [](bool b) { return b ? "yes" : "no"; };
  text << "  first kind:  " << mark(rep.first.pass) << "  (max residual " << format_number(rep.first.max_residual)
       << ")\n";
  text << "  second kind: " << mark(rep.second.pass) << "  (max residual " << format_number(rep.second.max_residual)
       << ")\n";
  text << "  third kind:  " << third_kind_name(rep.third.verdict) << "  (witness min |M_ab| "
       << format_number(rep.third.witness) << "; " << rep.third.note << ")\n";
  text << "  geometric route: first " << mark(rep.geometric.first) << ", second " << mark(rep.geometric.second)
       << ", max c'|H_a| " << format_number(rep.geometric.max_H) << ", max c'|H_ab| "
       << format_number(rep.geometric.max_Hab) << '\n';
  text << "  routes agree: " << mark(rep.routes_agree);
  if (!rep.diagnostic.empty()) text << "  (" << rep.diagnostic << ')';
  text << '\n';
  if (rep.proportionality.applicable) {
    text << "  H_ab proportionality: max deviation derived factor " << format_number(rep.proportionality.max_dev_derived)
         << ", fitted factor " << format_number(rep.proportionality.max_dev_fitted) << ", c0 b / sqrt(1+k(k+1)) factor "
         << format_number(rep.proportionality.max_dev_printed) << '\n';
  }
  csv << "# seed=" << o.seed << '\n' << "point,test,residual,verdict\n";
  for (const ClassificationRow& row : rep.rows) {
    csv << row.point << ',' << row.test << ',' << format_number(row.residual) << ',' << row.verdict << '\n';
  }
  r.text = text.str();
  r.csv = csv.str();
  return r;
}

RunOutput run_geodesic(const RunConfig& cfg) {
  const SpaceSpec& spec = *cfg.space;
  if (!cfg.from || !cfg.to) throw Error("geodesic: [geodesic] needs 'from' and 'to'");
  const GeodesicResult g = minimize_length(spec, *cfg.from, *cfg.to, cfg.geodesic);
  RunOutput r;
  r.status = g.converged ? 0 : 1;
  std::ostringstream text, csv;
  text << "geodesic: " << describe(spec) << ", " << vector_text(*cfg.from) << " -> " << vector_text(*cfg.to) << '\n';
  text << "  segments " << g.path.segments() << ", seed " << cfg.geodesic.seed << '\n';
  text << "  length " << format_number(g.length) << '\n';
  text << "  converged " << (g.converged ? "yes" : "no") << " after " << g.iterations << " iterations, gradient "
       << format_number(g.grad_norm);
  if (!g.note.empty()) text << " (" << g.note << ')';
  text << "\n  nodes:\n";
  for (const Vector& n : g.path.nodes) text << "    " << vector_text(n) << '\n';

  csv << "# seed=" << cfg.geodesic.seed << '\n' << "record,index,quantity,value\n";
  for (std::size_t n = 0; n < g.path.nodes.size(); ++n) {
    for (Eigen::Index i = 0; i < g.path.nodes[n].size(); ++i) {
      csv << "node," << n << ",x" << i + 1 << ',' << format_number(g.path.nodes[n][i]) << '\n';
    }
  }
  for (const GeodesicTraceRow& t : g.trace) {
    csv << "trace," << t.iteration << ",length," << format_number(t.length) << '\n';
    csv << "trace," << t.iteration << ",grad_norm," << format_number(t.grad_norm) << '\n';
    csv << "trace," << t.iteration << ",step," << format_number(t.step) << '\n';
  }
  r.text = text.str();
  r.csv = csv.str();
  return r;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "tensors") return Command::Tensors;
  if (name == "audit") return Command::Audit;
  if (name == "classify") return Command::Classify;
  if (name == "geodesic") return Command::Geodesic;
  throw Error("unknown command '" + std::string(name) + "'");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);  // no "-0"
  return buf;
}

RunOutput run(Command command, const RunConfig& cfg) {
  switch (command) {
    case Command::Tensors: return run_tensors(cfg);
    case Command::Audit: return run_audit(cfg);
    case Command::Classify: return run_classify(cfg);
    case Command::Geodesic: return run_geodesic(cfg);
  }
  throw Error("unknown command");
}

}  // namespace finsler::app
