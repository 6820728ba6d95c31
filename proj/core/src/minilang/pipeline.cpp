// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "faultloc/error.hpp"

namespace faultloc::minilang {

namespace {

std::string suffix(const std::string& name, int k) {
  return name + "_" + std::to_string(k);
}

void rename(Expr& e, int k) {
  if (e.kind == Expr::Kind::kVar) e.name = suffix(e.name, k);
  for (Expr& a : e.args) rename(a, k);
}

void rename(std::vector<Stmt>& stmts, int k) {
  for (Stmt& s : stmts) {
    if (!s.target.empty()) s.target = suffix(s.target, k);
    if (s.expr) rename(*s.expr, k);
    rename(s.body, k);
    rename(s.orelse, k);
    rename(s.init, k);
    rename(s.update, k);
  }
}

std::string iter_name(const std::vector<int>& it) {
  std::string out;
  for (int i : it) out += "[" + std::to_string(i) + "]";
  return out;
}

}  // namespace

UnrolledProgram unroll_program(const Program& p, const std::vector<TestCase>& failing) {
  if (failing.empty()) throw PreconditionError("unroll_program: no failing tests");
  UnrolledProgram u;
  u.source = p;
  for (std::size_t k = 0; k < failing.size(); ++k) {
    Scope s;
    s.index = static_cast<int>(k);
    s.test = failing[k];
    s.globals = p.globals;
    s.body = p.body;
    rename(s.globals, s.index);
    rename(s.body, s.index);
    u.scopes.push_back(std::move(s));
  }
  return u;
}

std::string_view to_string(RelaxKind kind) {
  switch (kind) {
    case RelaxKind::kStatement: return "statement";
    case RelaxKind::kIfCondition: return "if-condition";
    case RelaxKind::kLoopCondition: return "loop-condition";
    case RelaxKind::kExpressionList: return "expression-list";
    case RelaxKind::kElseBranch: return "else-branch";
  }
  return "?";
}

std::size_t RelaxationMap::num_shared() const {
  return static_cast<std::size_t>(
      std::count_if(vars_.begin(), vars_.end(), [](const RelaxVar& v) { return v.shared(); }));
}

std::optional<std::size_t> RelaxationMap::find(int stmt_id, RelaxKind kind,
                                               const std::vector<int>& iteration,
                                               int scope) const {
  auto it = index_.find(Key{stmt_id, static_cast<int>(kind), iteration, scope});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t RelaxationMap::at(int stmt_id, RelaxKind kind, const std::vector<int>& iteration,
                              int scope) const {
  if (auto i = find(stmt_id, kind, iteration, scope)) return *i;
  throw PreconditionError("no relaxation variable for statement " +
                          std::to_string(stmt_id) + iter_name(iteration));
}

std::size_t RelaxationMap::add(RelaxVar v) {
  Key key{v.stmt_id, static_cast<int>(v.kind), v.iteration, v.scope};
  if (index_.count(key)) throw PreconditionError("duplicate relaxation variable " + v.name);
  index_.emplace(std::move(key), vars_.size());
  vars_.push_back(std::move(v));
  return vars_.size() - 1;
}

void RelaxationMap::propagate_site_weights() {
  for (RelaxVar& v : vars_)
    if (v.shared()) v.weight = sites.at(v.stmt_id).weight;
}

namespace {

class Instrumenter {
 public:
  Instrumenter(RelaxationMap& r, int unwind, int scopes)
      : r_(r), unwind_(unwind), scopes_(scopes) {}

  std::vector<int> sites(const std::vector<Stmt>& stmts) {
    std::vector<int> ids;
    for (const Stmt& s : stmts) ids.push_back(site(s));
    return ids;
  }

  void walk(const std::vector<Stmt>& stmts, std::vector<int>& it) {
    for (const Stmt& s : stmts) walk(s, it);
  }

  void finish() {
    for (int k = 0; k < scopes_; ++k)
      for (const auto& [v, it] : else_keys_) {
        RelaxVar ev;
        ev.name = "ev" + std::to_string(v->id) + iter_name(it) + "_" + std::to_string(k);
        ev.stmt_id = v->id;
        ev.line = v->line;
        ev.kind = RelaxKind::kElseBranch;
        ev.weight = 0;
        ev.iteration = it;
        ev.scope = k;
        r_.add(std::move(ev));
      }
  }

 private:
  int site(const Stmt& s) {
    RelaxSite site;
    site.stmt_id = s.id;
    site.line = s.line;
    site.io = s.is_io();
    switch (s.kind) {
      case StmtKind::kIf: site.kind = RelaxKind::kIfCondition; break;
      case StmtKind::kWhile:
      case StmtKind::kFor:
        site.kind = RelaxKind::kLoopCondition;
        site.relaxed = s.expr.has_value();
        break;
      default: site.relaxed = s.is_simple();
    }
    site.children = sites(s.body);
    auto more = sites(s.orelse);
    site.children.insert(site.children.end(), more.begin(), more.end());
    for (const Stmt& item : s.init) site.items.push_back(item_site(item));
    for (const Stmt& item : s.update) site.items.push_back(item_site(item));
    r_.sites[s.id] = std::move(site);
    return s.id;
  }

  int item_site(const Stmt& item) {
    RelaxSite site;
    site.stmt_id = item.id;
    site.line = item.line;
    site.kind = RelaxKind::kExpressionList;
    r_.sites[item.id] = site;
    return item.id;
  }

  void shared(const Stmt& s, RelaxKind kind, const std::vector<int>& it) {
    RelaxVar v;
    v.name = "rv" + std::to_string(s.id) + iter_name(it);
    v.stmt_id = s.id;
    v.line = s.line;
    v.kind = kind;
    v.iteration = it;
    v.io = s.is_io();
    r_.add(std::move(v));
  }

  void condition(const Stmt& s, RelaxKind kind, const std::vector<int>& it) {
    shared(s, kind, it);
    else_keys_.emplace_back(&s, it);
  }

  void walk(const Stmt& s, std::vector<int>& it) {
    switch (s.kind) {
      case StmtKind::kIf:
        condition(s, RelaxKind::kIfCondition, it);
        walk(s.body, it);
        walk(s.orelse, it);
        return;
      case StmtKind::kWhile:
      case StmtKind::kFor:
        for (const Stmt& item : s.init) shared(item, RelaxKind::kExpressionList, it);
        for (int i = 0; i <= unwind_; ++i) {
          it.push_back(i);
          if (s.expr) condition(s, RelaxKind::kLoopCondition, it);
          if (i < unwind_) {
            walk(s.body, it);
            for (const Stmt& item : s.update) shared(item, RelaxKind::kExpressionList, it);
          }
          it.pop_back();
        }
        return;
      default:
        if (s.is_simple()) shared(s, RelaxKind::kStatement, it);
    }
  }

  RelaxationMap& r_;
  int unwind_;
  int scopes_;
  std::vector<std::pair<const Stmt*, std::vector<int>>> else_keys_;
};

}  // namespace

InstrumentedProgram instrument_program(UnrolledProgram u, int unwind) {
  if (unwind < 1) throw PreconditionError("unwind must be at least 1");
  InstrumentedProgram out;
  out.unwind = unwind;
  out.unrolled = std::move(u);
  const Program& src = out.unrolled.source;
  Instrumenter ins(out.relax, unwind, static_cast<int>(out.unrolled.scopes.size()));
  out.relax.roots = ins.sites(src.globals);
  auto body = ins.sites(src.body);
  out.relax.roots.insert(out.relax.roots.end(), body.begin(), body.end());
  std::vector<int> it;
  ins.walk(src.globals, it);
  ins.walk(src.body, it);
  ins.finish();
  return out;
}

namespace {

struct Weigher {
  std::map<int, RelaxSite>& sites;
  WeightMode mode;
  Weight io_penalty;

  // Weight of the site itself, computing nested sites first.
  Weight weigh(int id) {
    RelaxSite& s = sites.at(id);
    for (int item : s.items) sites.at(item).weight = 1;
    Weight nested = 0;
    for (int c : s.children) {
      Weight w = weigh(c);
      nested = mode == WeightMode::kHeight ? std::max(nested, height(c, w))
                                           : nested + subtree(c);
    }
    if (!s.relaxed) {
      s.weight = 0;
    } else if (mode == WeightMode::kFlat) {
      s.weight = 1;
    } else if (s.kind == RelaxKind::kIfCondition || s.kind == RelaxKind::kLoopCondition) {
      s.weight = mode == WeightMode::kHeight ? 1 + nested : std::max<Weight>(1, nested);
    } else {
      s.weight = s.io ? io_penalty : 1;
    }
    return s.weight;
  }

  // Sum of relaxed weights in the subtree rooted at `id` (site included).
  Weight subtree(int id) const {
    const RelaxSite& s = sites.at(id);
    Weight w = s.relaxed ? s.weight : 0;
    for (int item : s.items) w += sites.at(item).weight;
    for (int c : s.children) w += subtree(c);
    return w;
  }

  // Heaviest relaxed weight reachable through unrelaxed containers.
  Weight height(int id, Weight own) const {
    const RelaxSite& s = sites.at(id);
    if (s.relaxed) return own;
    Weight best = 0;
    for (int item : s.items) best = std::max(best, sites.at(item).weight);
    for (int c : s.children) best = std::max(best, height(c, sites.at(c).weight));
    return best;
  }
};

}  // namespace

void assign_weights(RelaxationMap& r, WeightMode mode, Weight io_penalty) {
  if (io_penalty < 1) throw PreconditionError("io penalty must be at least 1");
  Weigher w{r.sites, mode, io_penalty};
  for (int id : r.roots) w.weigh(id);
  r.propagate_site_weights();
}

WeightMode parse_weight_mode(std::string_view s) {
  if (s == "flat") return WeightMode::kFlat;
  if (s == "hierarchical") return WeightMode::kHierarchical;
  if (s == "height") return WeightMode::kHeight;
  throw PreconditionError("unknown weight mode '" + std::string(s) + "'");
}

std::string_view to_string(WeightMode m) {
  switch (m) {
    case WeightMode::kFlat: return "flat";
    case WeightMode::kHierarchical: return "hierarchical";
    case WeightMode::kHeight: return "height";
  }
  return "?";
}

namespace {

class Lister {
 public:
  explicit Lister(const InstrumentedProgram& p) : p_(p) {}

  void block(const std::vector<Stmt>& stmts, int depth, const std::string& idx) {
    for (const Stmt& s : stmts) stmt(s, depth, idx);
  }

  std::ostringstream out;

 private:
  std::string rv(const Stmt& s, const std::string& idx) const {
    return "rv" + std::to_string(s.id) + idx;
  }

  std::string weight(const Stmt& s) const {
    auto it = p_.relax.sites.find(s.id);
    if (it == p_.relax.sites.end() || !it->second.relaxed) return "";
    return "  // line " + std::to_string(s.line) + ", w=" + std::to_string(it->second.weight);
  }

  std::string items(const std::vector<Stmt>& list, const std::string& idx) const {
    std::string r;
    for (std::size_t i = 0; i < list.size(); ++i)
      r += (i ? ", " : "") + rv(list[i], idx) + " ? (" + list[i].target + " = " +
           render(*list[i].expr) + ") : 1";
    return r;
  }

  void stmt(const Stmt& s, int depth, const std::string& idx) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    out << pad;
    switch (s.kind) {
      case StmtKind::kDecl:
        out << "int " << s.target << ";";
        if (s.expr) out << " if (" << rv(s, idx) << ") " << s.target << " = " << render(*s.expr) << ";";
        out << weight(s) << "\n";
        return;
      case StmtKind::kAssign:
        out << "if (" << rv(s, idx) << ") " << s.target << " = " << render(*s.expr) << ";"
            << weight(s) << "\n";
        return;
      case StmtKind::kRead:
        out << "if (" << rv(s, idx) << ") " << s.target << " = read();" << weight(s) << "\n";
        return;
      case StmtKind::kPrint:
        out << "if (" << rv(s, idx) << ") print(" << render(*s.expr) << ");" << weight(s) << "\n";
        return;
      case StmtKind::kReturn: out << "return;\n"; return;
      case StmtKind::kIf:
        out << "if (" << rv(s, idx) << " ? " << render(*s.expr) << " : ev" << s.id << idx
            << ") {" << weight(s) << "\n";
        block(s.body, depth + 1, idx);
        if (!s.orelse.empty()) {
          out << pad << "} else {\n";
          block(s.orelse, depth + 1, idx);
        }
        out << pad << "}\n";
        return;
      case StmtKind::kWhile:
      case StmtKind::kFor: {
        std::string inner = idx + "[l" + std::to_string(s.id) + "]";
        std::string cond = s.expr ? rv(s, inner) + " ? " + render(*s.expr) + " : ev" +
                                        std::to_string(s.id) + inner
                                  : "1";
        if (s.kind == StmtKind::kWhile) {
          out << "while (" << cond << ") {" << weight(s) << "\n";
        } else {
          out << "for (" << items(s.init, idx) << "; " << cond << "; "
              << items(s.update, inner) << ") {" << weight(s) << "\n";
        }
        block(s.body, depth + 1, inner);
        out << pad << "  l" << s.id << "++;\n" << pad << "}\n";
        return;
      }
    }
  }

  const InstrumentedProgram& p_;
};

}  // namespace

std::string render_instrumented(const InstrumentedProgram& p) {
  Lister l(p);
  l.block(p.unrolled.source.globals, 0, "");
  l.out << "int main() {\n";
  l.block(p.unrolled.source.body, 1, "");
  l.out << "}\n";
  return l.out.str();
}

}  // namespace faultloc::minilang
