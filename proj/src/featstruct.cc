// Copyright 2026 The gramwb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gramwb/featstruct.h"

#include <cassert>
#include <unordered_map>
#include <unordered_set>

#include "gramwb/value_syntax.h"

namespace gramwb {
namespace {

const std::string kEmptyName;

const std::shared_ptr<const FeatureStructure>& EmptyFs() {
  static const auto* empty =
      new std::shared_ptr<const FeatureStructure>(std::make_shared<FeatureStructure>());
  return *empty;
}

// Result of following a variable chain. `holder` is the last variable on
// the chain: either unbound, or bound directly to `value`.
struct Cell {
  Value value;
  std::optional<std::string> holder;
};

Cell DerefCell(const Value& v, const Binding& env) {
  Cell cell{v, std::nullopt};
  std::size_t guard = env.size() + 1;
  while (cell.value.is_var()) {
    cell.holder = cell.value.name();
    const Value* bound = env.lookup(cell.value.name());
    if (bound == nullptr) break;
    cell.value = *bound;
    if (guard-- == 0) throw Error("cyclic-binding", "variable chain does not terminate");
  }
  return cell;
}

bool OccursRec(const std::string& var, const Value& v, const Binding& env,
               std::unordered_set<std::string>& seen) {
  if (v.is_atom()) return false;
  if (v.is_var()) {
    if (v.name() == var) return true;
    if (!seen.insert(v.name()).second) return false;
    const Value* bound = env.lookup(v.name());
    return bound != nullptr && OccursRec(var, *bound, env, seen);
  }
  for (const auto& [name, child] : v.fs().features()) {
    if (OccursRec(var, child, env, seen)) return true;
  }
  return false;
}

bool Occurs(const std::string& var, const Value& v, const Binding& env) {
  std::unordered_set<std::string> seen;
  return OccursRec(var, v, env, seen);
}

std::string DescribeKind(const Value& v) {
  if (v.is_atom()) return v.name();
  if (v.is_var()) return v.name();
  return "[...]";
}

struct UnifyState {
  Binding& env;
  std::vector<std::string> path;
  UnifyStatus status = UnifyStatus::kSuccess;
  std::string detail;
};

bool UnifyRec(const Value& a, const Value& b, UnifyState& st, Value& out) {
  Cell ca = DerefCell(a, st.env);
  Cell cb = DerefCell(b, st.env);
  if (ca.holder && cb.holder && *ca.holder == *cb.holder) {
    out = Value::Var(*ca.holder);
    return true;
  }
  const Value& va = ca.value;
  const Value& vb = cb.value;
  if (va.is_var() && vb.is_var()) {
    st.env.bind(va.name(), vb);
    out = vb;
    return true;
  }
  if (va.is_var() || vb.is_var()) {
    const Cell& open = va.is_var() ? ca : cb;
    const Cell& other = va.is_var() ? cb : ca;
    if (Occurs(open.value.name(), other.value, st.env)) {
      st.status = UnifyStatus::kOccursCheck;
      st.detail = "variable " + open.value.name() + " occurs in its own value";
      return false;
    }
    st.env.bind(open.value.name(),
                other.holder ? Value::Var(*other.holder) : other.value);
    out = open.value;
    return true;
  }
  if (va.is_atom() && vb.is_atom()) {
    if (va.name() != vb.name()) {
      st.status = UnifyStatus::kClash;
      st.detail = va.name() + " vs " + vb.name();
      return false;
    }
    out = ca.holder ? Value::Var(*ca.holder) : cb.holder ? Value::Var(*cb.holder) : va;
    return true;
  }
  if (va.is_atom() != vb.is_atom()) {
    st.status = UnifyStatus::kClash;
    st.detail = DescribeKind(va) + " vs " + DescribeKind(vb);
    return false;
  }
  FeatureStructure::Map merged = va.fs().features();
  for (const auto& [name, bval] : vb.fs().features()) {
    auto it = merged.find(name);
    if (it == merged.end()) {
      merged.emplace(name, bval);
      continue;
    }
    st.path.push_back(name);
    Value child;
    if (!UnifyRec(it->second, bval, st, child)) return false;
    st.path.pop_back();
    it->second = std::move(child);
  }
  Value result = Value::Fs(FeatureStructure(std::move(merged)));
  for (const auto* holder : {&ca.holder, &cb.holder}) {
    if (*holder && Occurs(**holder, result, st.env)) {
      st.status = UnifyStatus::kOccursCheck;
      st.detail = "variable " + **holder + " occurs in its own value";
      return false;
    }
  }
  if (ca.holder) {
    st.env.bind(*ca.holder, result);
    if (cb.holder) st.env.bind(*cb.holder, Value::Var(*ca.holder));
    out = Value::Var(*ca.holder);
  } else if (cb.holder) {
    st.env.bind(*cb.holder, result);
    out = Value::Var(*cb.holder);
  } else {
    out = std::move(result);
  }
  return true;
}

void CollectVarsRec(const Value& v, std::vector<std::string>& out,
                    std::unordered_set<std::string>& seen) {
  if (v.is_var()) {
    if (seen.insert(v.name()).second) out.push_back(v.name());
  } else if (v.is_fs()) {
    for (const auto& [name, child] : v.fs().features()) CollectVarsRec(child, out, seen);
  }
}

// ---------------------------------------------------------------------------
// Subsumption and difference

// Identity of a node for reentrancy bookkeeping. Atoms are compared by
// value; structures not reached through a variable are unique per path.
std::string NodeIdentity(const Cell& cell, const std::string& path) {
  if (cell.value.is_atom()) return "a:" + cell.value.name();
  if (cell.holder) return "v:" + *cell.holder;
  return "p:" + path;
}

bool SubsumesRec(const Value& a, const Binding& env_a, const Value& b,
                 const Binding& env_b, const std::string& path,
                 std::unordered_map<std::string, std::string>& mapping) {
  Cell ca = DerefCell(a, env_a);
  Cell cb = DerefCell(b, env_b);
  const std::string id_b = NodeIdentity(cb, path);
  if (ca.holder && !ca.value.is_atom()) {
    auto [it, inserted] = mapping.emplace(*ca.holder, id_b);
    if (!inserted) return it->second == id_b;
  }
  if (ca.value.is_var()) return true;
  if (ca.value.is_atom()) return cb.value.is_atom() && cb.value.name() == ca.value.name();
  if (!cb.value.is_fs()) return false;
  for (const auto& [name, child] : ca.value.fs().features()) {
    const Value* other = cb.value.fs().find(name);
    if (other == nullptr) return false;
    if (!SubsumesRec(child, env_a, *other, env_b, path + "/" + name, mapping)) return false;
  }
  return true;
}

struct DiffState {
  const Binding& env_a;
  const Binding& env_b;
  std::unordered_map<std::string, std::string> a_to_b;
  std::unordered_map<std::string, std::string> b_to_a;
  std::vector<std::string> path;
};

bool SameNodesRec(const Value& a, const Value& b, DiffState& st) {
  Cell ca = DerefCell(a, st.env_a);
  Cell cb = DerefCell(b, st.env_b);
  const std::string joined = JoinPath(st.path);
  if (ca.value.is_atom() || cb.value.is_atom()) {
    return ca.value.is_atom() && cb.value.is_atom() && ca.value.name() == cb.value.name();
  }
  const std::string id_a = NodeIdentity(ca, joined);
  const std::string id_b = NodeIdentity(cb, joined);
  auto [ia, new_a] = st.a_to_b.emplace(id_a, id_b);
  auto [ib, new_b] = st.b_to_a.emplace(id_b, id_a);
  if (!new_a || !new_b) return ia->second == id_b && ib->second == id_a;
  if (ca.value.is_var() || cb.value.is_var()) return ca.value.is_var() && cb.value.is_var();
  const auto& fa = ca.value.fs().features();
  const auto& fb = cb.value.fs().features();
  auto ia2 = fa.begin();
  auto ib2 = fb.begin();
  while (ia2 != fa.end() || ib2 != fb.end()) {
    if (ib2 == fb.end() || (ia2 != fa.end() && ia2->first < ib2->first)) {
      st.path.push_back(ia2->first);
      return false;
    }
    if (ia2 == fa.end() || ib2->first < ia2->first) {
      st.path.push_back(ib2->first);
      return false;
    }
    st.path.push_back(ia2->first);
    if (!SameNodesRec(ia2->second, ib2->second, st)) return false;
    st.path.pop_back();
    ++ia2;
    ++ib2;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rendering

std::string QuoteAtom(const std::string& atom) {
  if (IsPlainLowerIdent(atom)) return atom;
  std::string out = "'";
  for (char c : atom) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += "'";
  return out;
}

std::size_t DisplayWidth(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++w;
  }
  return w;
}

class Renderer {
 public:
  Renderer(const Binding& env, RenderStyle style) : env_(env), style_(style) {}

  std::string Run(const Value& v) {
    Count(v);
    if (style_ == RenderStyle::kBracketed) return Inline(v);
    std::vector<std::string> lines = Block(v);
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i > 0) out += "\n";
      out += lines[i];
    }
    return out;
  }

 private:
  void Count(const Value& v) {
    Cell c = DerefCell(v, env_);
    if (c.holder && !c.value.is_atom()) {
      if (++counts_[*c.holder] > 1) return;
    }
    if (c.value.is_fs()) {
      for (const auto& [name, child] : c.value.fs().features()) Count(child);
    }
  }

  // Returns the tag prefix for this occurrence and whether the value body
  // still has to be written.
  std::pair<std::string, bool> Tag(const Cell& c) {
    if (!c.holder || c.value.is_atom()) return {"", true};
    const bool unbound = c.value.is_var();
    if (!unbound && counts_[*c.holder] < 2) return {"", true};
    auto it = names_.find(*c.holder);
    if (it != names_.end()) return {it->second, false};
    std::string name = "V" + std::to_string(names_.size() + 1);
    names_.emplace(*c.holder, name);
    if (unbound) return {name, false};
    return {name + ":", true};
  }

  std::string Inline(const Value& v) {
    Cell c = DerefCell(v, env_);
    auto [tag, body] = Tag(c);
    if (!body) return tag;
    if (c.value.is_atom()) return tag + QuoteAtom(c.value.name());
    std::string out = tag + "[";
    bool first = true;
    for (const auto& [name, child] : c.value.fs().features()) {
      if (!first) out += ", ";
      first = false;
      out += name + "=" + Inline(child);
    }
    return out + "]";
  }

  std::vector<std::string> Block(const Value& v) {
    Cell c = DerefCell(v, env_);
    auto [tag, body] = Tag(c);
    if (!body) return {tag};
    if (c.value.is_atom()) return {tag + QuoteAtom(c.value.name())};
    if (c.value.fs().empty()) return {tag + "[]"};
    std::vector<std::string> out;
    const std::string pad(DisplayWidth(tag) + 1, ' ');
    const auto& feats = c.value.fs().features();
    std::size_t i = 0;
    for (const auto& [name, child] : feats) {
      const std::string lead = (i == 0 ? tag + "[" : pad) + name + "=";
      std::vector<std::string> sub = Block(child);
      const std::string indent(DisplayWidth(lead), ' ');
      for (std::size_t k = 0; k < sub.size(); ++k) {
        out.push_back((k == 0 ? lead : indent) + sub[k]);
      }
      out.back() += (++i == feats.size()) ? "]" : ",";
    }
    return out;
  }

  const Binding& env_;
  RenderStyle style_;
  std::unordered_map<std::string, int> counts_;
  std::unordered_map<std::string, std::string> names_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Value / FeatureStructure / Binding

Value::Value() : rep_(EmptyFs()) {}

Value Value::Atom(std::string name) {
  Value v;
  v.rep_ = AtomRep{std::move(name)};
  return v;
}

Value Value::Var(std::string name) {
  Value v;
  v.rep_ = VarRep{std::move(name)};
  return v;
}

Value Value::Fs(FeatureStructure fs) {
  Value v;
  if (!fs.empty()) v.rep_ = std::make_shared<const FeatureStructure>(std::move(fs));
  return v;
}

const std::string& Value::name() const {
  if (const auto* a = std::get_if<AtomRep>(&rep_)) return a->name;
  if (const auto* v = std::get_if<VarRep>(&rep_)) return v->name;
  return kEmptyName;
}

const FeatureStructure& Value::fs() const {
  const auto* p = std::get_if<2>(&rep_);
  assert(p != nullptr);
  return **p;
}

bool operator==(const Value& a, const Value& b) {
  if (a.rep_.index() != b.rep_.index()) return false;
  if (a.is_fs()) return a.fs() == b.fs();
  return a.name() == b.name();
}

const Value* FeatureStructure::find(std::string_view name) const {
  auto it = features_.find(name);
  return it == features_.end() ? nullptr : &it->second;
}

void FeatureStructure::set(std::string name, Value value) {
  features_.insert_or_assign(std::move(name), std::move(value));
}

const Value* Binding::lookup(std::string_view var) const {
  auto it = cells_.find(var);
  return it == cells_.end() ? nullptr : &it->second;
}

void Binding::bind(std::string var, Value value) {
  cells_.insert_or_assign(std::move(var), std::move(value));
}

void Binding::merge_disjoint(const Binding& other) {
  for (const auto& [name, value] : other.cells_) cells_.insert_or_assign(name, value);
}

// ---------------------------------------------------------------------------
// Operations

Value Deref(const Value& v, const Binding& env) { return DerefCell(v, env).value; }

Value Resolve(const Value& v, const Binding& env) {
  Value d = Deref(v, env);
  if (!d.is_fs()) return d;
  FeatureStructure out;
  for (const auto& [name, child] : d.fs().features()) out.set(name, Resolve(child, env));
  return Value::Fs(std::move(out));
}

Term Close(const Value& v, const Binding& env) {
  Term t{v, {}};
  std::vector<Value> stack{v};
  std::unordered_set<std::string> seen;
  while (!stack.empty()) {
    Value cur = std::move(stack.back());
    stack.pop_back();
    if (cur.is_var()) {
      if (!seen.insert(cur.name()).second) continue;
      if (const Value* bound = env.lookup(cur.name())) {
        t.env.bind(cur.name(), *bound);
        stack.push_back(*bound);
      }
    } else if (cur.is_fs()) {
      for (const auto& [name, child] : cur.fs().features()) stack.push_back(child);
    }
  }
  return t;
}

Value RenameVars(const Value& v,
                 const std::function<std::string(const std::string&)>& rename) {
  if (v.is_atom()) return v;
  if (v.is_var()) return Value::Var(rename(v.name()));
  FeatureStructure out;
  for (const auto& [name, child] : v.fs().features()) out.set(name, RenameVars(child, rename));
  return Value::Fs(std::move(out));
}

Term RenameVars(const Term& t,
                const std::function<std::string(const std::string&)>& rename) {
  Term out{RenameVars(t.value, rename), {}};
  for (const auto& [name, value] : t.env.cells()) {
    out.env.bind(rename(name), RenameVars(value, rename));
  }
  return out;
}

std::vector<std::string> CollectVars(const Value& v) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  CollectVarsRec(v, out, seen);
  return out;
}

bool UnifyInto(const Value& a, const Value& b, Binding& env, Value* result,
               std::vector<std::string>* failure_path, UnifyStatus* status) {
  UnifyState st{env, {}, UnifyStatus::kSuccess, {}};
  Value out;
  const bool ok = UnifyRec(a, b, st, out);
  if (status != nullptr) *status = st.status;
  if (ok) {
    if (result != nullptr) *result = std::move(out);
  } else if (failure_path != nullptr) {
    *failure_path = std::move(st.path);
  }
  return ok;
}

UnifyOutcome Unify(const Value& a, const Value& b, const Binding& env) {
  UnifyOutcome outcome;
  outcome.env = env;
  UnifyState st{outcome.env, {}, UnifyStatus::kSuccess, {}};
  Value out;
  if (UnifyRec(a, b, st, out)) {
    outcome.result = std::move(out);
    return outcome;
  }
  outcome.status = st.status;
  outcome.path = std::move(st.path);
  outcome.detail = std::move(st.detail);
  outcome.env = env;
  return outcome;
}

bool Subsumes(const Value& a, const Binding& env_a, const Value& b,
              const Binding& env_b) {
  std::unordered_map<std::string, std::string> mapping;
  return SubsumesRec(a, env_a, b, env_b, "", mapping);
}

bool Isomorphic(const Term& a, const Term& b) { return Subsumes(a, b) && Subsumes(b, a); }

std::optional<std::vector<std::string>> FirstDifference(const Term& a, const Term& b) {
  DiffState st{a.env, b.env, {}, {}, {}};
  if (SameNodesRec(a.value, b.value, st)) return std::nullopt;
  return st.path;
}

std::string Render(const Value& v, const Binding& env, RenderStyle style) {
  return Renderer(env, style).Run(v);
}

std::string RenderRaw(const Value& v) {
  if (v.is_atom()) return QuoteAtom(v.name());
  if (v.is_var()) return v.name();
  std::string out = "[";
  bool first = true;
  for (const auto& [name, child] : v.fs().features()) {
    if (!first) out += ", ";
    first = false;
    out += name + "=" + RenderRaw(child);
  }
  return out + "]";
}

std::string JoinPath(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty()) out += ".";
    out += p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Syntax

void AddDiagnostic(const ValueSyntaxContext& ctx, const Token& at, std::string kind,
                   std::string message, Severity severity) {
  if (ctx.diagnostics == nullptr) return;
  ctx.diagnostics->push_back(Diagnostic{severity, std::move(kind), std::move(message),
                                        SourceLocation{ctx.file, at.line, at.column}});
}

std::optional<Value> ParseValue(TokenCursor& cursor, const ValueSyntaxContext& ctx) {
  const Token& t = cursor.peek();
  if (t.is("[")) {
    cursor.next();
    return ParseBracketBody(cursor, ctx);
  }
  if (t.kind == TokenKind::kUpperIdent) {
    Token var = cursor.next();
    if (ctx.variables != nullptr) ctx.variables->push_back(var.text);
    if (cursor.accept(":")) {
      std::optional<Value> inner = ParseValue(cursor, ctx);
      if (!inner) return std::nullopt;
      if (ctx.inline_bindings != nullptr) {
        std::vector<std::string> path;
        if (!UnifyInto(Value::Var(var.text), *inner, *ctx.inline_bindings, nullptr,
                       &path)) {
          AddDiagnostic(ctx, var, "inline-binding-clash",
                        "conflicting inline bindings for variable " + var.text);
          return std::nullopt;
        }
      }
    }
    return Value::Var(var.text);
  }
  if (t.kind == TokenKind::kLowerIdent || t.kind == TokenKind::kQuoted) {
    return Value::Atom(cursor.next().text);
  }
  if (t.kind == TokenKind::kBad) {
    AddDiagnostic(ctx, t, "bad-token", t.text);
    return std::nullopt;
  }
  AddDiagnostic(ctx, t, "expected-value",
                "expected an atom, a variable or '[' but found " +
                    (t.kind == TokenKind::kEnd ? std::string("end of input")
                                               : "'" + t.text + "'"));
  return std::nullopt;
}

std::optional<Value> ParseBracketBody(TokenCursor& cursor, const ValueSyntaxContext& ctx) {
  if (cursor.accept("]")) return Value();
  auto expect_close = [&]() -> bool {
    if (cursor.accept("]")) return true;
    const Token& t = cursor.peek();
    AddDiagnostic(ctx, t, "unbalanced-brackets",
                  "unbalanced brackets: expected ']' but found " +
                      (t.kind == TokenKind::kEnd ? std::string("end of input")
                                                 : "'" + t.text + "'"));
    return false;
  };
  if (cursor.peek().kind == TokenKind::kUpperIdent && !cursor.peek(1).is("=")) {
    std::optional<Value> v = ParseValue(cursor, ctx);
    if (!v || !expect_close()) return std::nullopt;
    return v;
  }
  FeatureStructure fs;
  while (true) {
    const Token& name = cursor.peek();
    if (name.kind != TokenKind::kLowerIdent) {
      if (name.kind == TokenKind::kUpperIdent) {
        AddDiagnostic(ctx, name, "uppercase-feature",
                      "feature names must start lowercase: '" + name.text + "'");
      } else if (name.kind == TokenKind::kEnd || name.is(".")) {
        AddDiagnostic(ctx, name, "unbalanced-brackets",
                      "unbalanced brackets: expected ']'");
      } else {
        AddDiagnostic(ctx, name, "expected-feature",
                      "expected a feature name but found '" + name.text + "'");
      }
      return std::nullopt;
    }
    Token feature = cursor.next();
    if (!cursor.accept("=")) {
      AddDiagnostic(ctx, cursor.peek(), "expected-equals",
                    "expected '=' after feature '" + feature.text + "'");
      return std::nullopt;
    }
    std::optional<Value> v = ParseValue(cursor, ctx);
    if (!v) return std::nullopt;
    if (fs.find(feature.text) != nullptr) {
      AddDiagnostic(ctx, feature, "duplicate-feature",
                    "feature '" + feature.text + "' appears twice in one structure");
      return std::nullopt;
    }
    fs.set(feature.text, std::move(*v));
    if (cursor.accept(",")) continue;
    if (!expect_close()) return std::nullopt;
    return Value::Fs(std::move(fs));
  }
}

TermParse ParseTerm(std::string_view text) {
  TermParse out;
  TokenCursor cursor(Tokenize(text));
  Term term;
  ValueSyntaxContext ctx{"", &term.env, &out.diagnostics, nullptr};
  std::optional<Value> v = ParseValue(cursor, ctx);
  if (v && !cursor.at_end()) {
    AddDiagnostic(ctx, cursor.peek(), "trailing-input",
                  "unexpected '" + cursor.peek().text + "' after structure");
    v.reset();
  }
  if (v) {
    term.value = std::move(*v);
    out.term = std::move(term);
  }
  return out;
}

Term MustParseTerm(std::string_view text) {
  TermParse p = ParseTerm(text);
  if (!p.term) {
    throw Error("syntax", p.diagnostics.empty() ? "cannot parse structure"
                                                : FormatDiagnostic(p.diagnostics.front()));
  }
  return std::move(*p.term);
}

}  // namespace gramwb
