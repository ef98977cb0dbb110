#include "sqc/script.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace sqc {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Forall,
  Exists,
  End,
  Bad,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::End: return "end of formula";
    case Tok::Bad: return "unrecognized character";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0, col = 0, end_col = 0;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t line, std::size_t col)
      : text_(text), line_(line), col_(col) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      t.end_col = col_;
      return t;
    }
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (std::isalpha(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        advance(1);
      t.text = std::string(text_.substr(start, pos_ - start));
      t.kind = t.text == "forall" ? Tok::Forall : t.text == "exists" ? Tok::Exists : Tok::Ident;
    } else if (match("<->") || match("↔")) {
      t.kind = Tok::Iff;
    } else if (match("->") || match("→")) {
      t.kind = Tok::Imp;
    } else if (match("¬") || match("~")) {
      t.kind = Tok::Not;
    } else if (match("∧") || match("&")) {
      t.kind = Tok::And;
    } else if (match("∨") || match("|")) {
      t.kind = Tok::Or;
    } else if (match("∀")) {
      t.kind = Tok::Forall;
    } else if (match("∃")) {
      t.kind = Tok::Exists;
    } else if (match("(")) {
      t.kind = Tok::LParen;
    } else if (match(")")) {
      t.kind = Tok::RParen;
    } else if (match(",")) {
      t.kind = Tok::Comma;
    } else if (match(".")) {
      t.kind = Tok::Dot;
    } else {
      t.kind = Tok::Bad;
      std::size_t len = utf8_length(c);
      t.text = std::string(text_.substr(pos_, len));
      advance(len);
    }
    if (t.text.empty() && t.kind != Tok::Ident) t.text = std::string(describe(t.kind));
    t.end_col = col_;
    return t;
  }

 private:
  static std::size_t utf8_length(unsigned char c) {
    if (c < 0x80) return 1;
    if ((c >> 5) == 0x6) return 2;
    if ((c >> 4) == 0xE) return 3;
    if ((c >> 3) == 0x1E) return 4;
    return 1;
  }

  // Columns count code points, not bytes.
  void advance(std::size_t bytes) {
    std::size_t end = std::min(pos_ + bytes, text_.size());
    while (pos_ < end) {
      unsigned char c = static_cast<unsigned char>(text_[pos_]);
      pos_ += std::min(utf8_length(c), text_.size() - pos_);
      ++col_;
    }
  }

  bool match(std::string_view s) {
    if (text_.substr(pos_, s.size()) != s) return false;
    advance(s.size());
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_, col_;
};

// ---------------------------------------------------------------------------
// Formula parser

struct SyntaxError {
  Diagnostic diagnostic;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::size_t line, std::size_t col)
      : lexer_(text, line, col) {
    tok_ = lexer_.next();
  }

  Formula parse() {
    Formula f = formula();
    if (tok_.kind != Tok::End) fail({Tok::End});
    return f;
  }

 private:
  [[noreturn]] void fail(std::initializer_list<Tok> expected, std::string extra = {}) {
    std::string msg = "expected ";
    std::size_t i = 0;
    for (Tok t : expected) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += describe(t);
      ++i;
    }
    msg += tok_.kind == Tok::End ? ", found end of formula"
                                 : ", found '" + tok_.text + "'";
    if (!extra.empty()) msg += "; " + extra;
    fail_with(std::move(msg));
  }

  [[noreturn]] void fail_with(std::string msg) {
    Diagnostic d;
    d.code = std::string(codes::kSyntaxError);
    d.message = std::move(msg);
    d.location = {tok_.line, tok_.col, tok_.line, std::max(tok_.end_col, tok_.col)};
    throw SyntaxError{std::move(d)};
  }

  void bump() { tok_ = lexer_.next(); }

  bool accept(Tok k) {
    if (tok_.kind != k) return false;
    bump();
    return true;
  }

  Formula formula() { return implication(); }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Imp)) return Formula::imp(std::move(lhs), implication());
    if (accept(Tok::Iff)) {
      Formula rhs = disjunction();
      if (tok_.kind == Tok::Iff)
        fail_with("'<->' does not associate; add parentheses");
      return Formula::con(Formula::imp(lhs, rhs), Formula::imp(rhs, lhs));
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::dis(std::move(f), conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = negation();
    while (accept(Tok::And)) f = Formula::con(std::move(f), negation());
    return f;
  }

  Formula negation() {
    if (accept(Tok::Not)) return Formula::neg(negation());
    return atom();
  }

  Formula atom() {
    switch (tok_.kind) {
      case Tok::LParen: {
        bump();
        Formula f = formula();
        if (!accept(Tok::RParen)) fail({Tok::RParen});
        return f;
      }
      case Tok::Forall:
      case Tok::Exists: {
        bool universal = tok_.kind == Tok::Forall;
        bump();
        if (tok_.kind != Tok::Ident) fail({Tok::Ident});
        std::string name = tok_.text;
        bump();
        if (!accept(Tok::Dot)) fail({Tok::Dot});
        binders_.push_back(name);
        Formula body = formula();
        binders_.pop_back();
        return universal ? Formula::uni(std::move(body), name)
                         : Formula::exi(std::move(body), name);
      }
      case Tok::Ident: {
        std::string name = tok_.text;
        bump();
        return Formula::pred(std::move(name), arguments());
      }
      default:
        fail({Tok::LParen, Tok::Not, Tok::Forall, Tok::Exists, Tok::Ident});
    }
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (!accept(Tok::LParen)) return args;
    do {
      args.push_back(term());
    } while (accept(Tok::Comma));
    if (!accept(Tok::RParen)) fail({Tok::Comma, Tok::RParen});
    return args;
  }

  Term term() {
    if (tok_.kind != Tok::Ident) fail({Tok::Ident});
    std::string name = tok_.text;
    Token at = tok_;
    bump();
    auto bound = std::find(binders_.rbegin(), binders_.rend(), name);
    if (bound != binders_.rend()) {
      if (tok_.kind == Tok::LParen) {
        tok_ = at;
        fail_with("'" + name + "' is a bound variable and cannot take arguments");
      }
      return Term::var(static_cast<std::size_t>(bound - binders_.rbegin()));
    }
    return Term::app(std::move(name), arguments());
  }

  Lexer lexer_;
  Token tok_;
  std::vector<std::string> binders_;
};

// ---------------------------------------------------------------------------
// Printer

enum Level { kImp = 1, kDis = 2, kCon = 3, kNeg = 4 };

int level_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Imp: return kImp;
    case Formula::Kind::Dis: return kDis;
    case Formula::Kind::Con: return kCon;
    default: return kNeg;
  }
}

class Printer {
 public:
  explicit Printer(const Formula& root) {
    for (const auto& s : constants_of(root).functions) avoid_.insert(s.name);
  }

  // `min_level`: weakest connective allowed unparenthesized here. `tail`: the
  // text printed here runs to the end of the enclosing context, so a
  // quantifier (whose body extends right) needs no parentheses.
  std::string print(const Formula& f, int min_level, bool tail) {
    using K = Formula::Kind;
    if (f.is_quantifier()) {
      if (!tail) return "(" + print(f, kImp, true) + ")";
      std::string name = choose_name(f.binder_name());
      names_.push_back(name);
      std::string body = print(f.body(), kImp, true);
      names_.pop_back();
      return std::string(f.is(K::Uni) ? "forall " : "exists ") + name + ". " + body;
    }
    if (f.is(K::Pred)) {
      std::string out = f.symbol();
      if (!f.args().empty()) out += args(f.args());
      return out;
    }
    if (f.is(K::Neg)) return "~" + print(f.body(), kNeg, tail);

    int level = level_of(f);
    if (level < min_level) return "(" + print(f, kImp, true) + ")";
    const char* op = f.is(K::Imp) ? " -> " : f.is(K::Dis) ? " | " : " & ";
    // -> associates to the right, | and & to the left.
    int left = f.is(K::Imp) ? kDis : level;
    int right = f.is(K::Imp) ? kImp : level + 1;
    return print(f.lhs(), left, false) + op + print(f.rhs(), right, tail);
  }

  std::string term(const Term& t) {
    if (t.is_var()) {
      if (t.index < names_.size()) return names_[names_.size() - 1 - t.index];
      return "#" + std::to_string(t.index);
    }
    return t.args.empty() ? t.symbol : t.symbol + args(t.args);
  }

 private:
  std::string args(const std::vector<Term>& ts) {
    std::string out = "(";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) out += ", ";
      out += term(ts[i]);
    }
    return out + ")";
  }

  bool taken(const std::string& name) const {
    return name == "forall" || name == "exists" || avoid_.count(name) ||
           std::find(names_.begin(), names_.end(), name) != names_.end();
  }

  std::string choose_name(const std::string& display) {
    std::string base = display.empty() ? "x" + std::to_string(names_.size()) : display;
    if (!taken(base)) return base;
    for (std::size_t n = 1;; ++n) {
      std::string candidate = base + std::to_string(n);
      if (!taken(candidate)) return candidate;
    }
  }

  std::set<std::string> avoid_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Script layout

struct Line {
  std::size_t number = 0;  // 1-based
  std::string_view raw;    // without line terminator
  std::string_view content;  // raw minus comment and trailing space
  std::size_t indent = 0;  // leading whitespace characters

  bool blank() const { return content.find_first_not_of(" \t") == std::string_view::npos; }
  bool indented() const { return !blank() && indent > 0; }
  std::string_view trimmed() const {
    auto s = content.substr(indent);
    return s;
  }
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0, number = 1;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    bool last = end == std::string_view::npos;
    if (last) end = text.size();
    if (last && start == text.size()) break;
    Line l;
    l.number = number++;
    l.raw = text.substr(start, end - start);
    if (!l.raw.empty() && l.raw.back() == '\r') l.raw.remove_suffix(1);
    l.content = l.raw.substr(0, l.raw.find('#'));
    while (!l.content.empty() && (l.content.back() == ' ' || l.content.back() == '\t'))
      l.content.remove_suffix(1);
    while (l.indent < l.content.size() &&
           (l.content[l.indent] == ' ' || l.content[l.indent] == '\t'))
      ++l.indent;
    lines.push_back(l);
    start = end + 1;
  }
  return lines;
}

// Formula lines must be indented by two spaces or a tab.
bool formula_indent(const Line& l) {
  return l.indented() && (l.raw.substr(0, 2) == "  " || l.raw.front() == '\t');
}

bool is_rule_line(const Line& l) {
  return !l.blank() && l.indent == 0 && rule_from_name(l.trimmed()).has_value();
}

bool is_plus_line(const Line& l) { return !l.blank() && l.trimmed() == "+"; }

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                                std::tolower(static_cast<unsigned char>(b[j - 1]))
                            ? 0
                            : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Diagnostic located(std::string_view code, std::string message, const Line& l) {
  Diagnostic d;
  d.code = std::string(code);
  d.message = std::move(message);
  std::size_t width = 0;
  for (unsigned char c : l.content)
    if ((c & 0xC0) != 0x80) ++width;
  d.location = {l.number, l.indent + 1, l.number, std::max(width, l.indent + 1)};
  return d;
}

std::string join_raw(const std::vector<Line>& lines, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    out += lines[i].raw;
    out += '\n';
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c >> 5) == 0x6) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c >> 4) == 0xE) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c >> 3) == 0x1E) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > text.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

FormulaResult parse_formula(std::string_view text, std::size_t line, std::size_t col) {
  try {
    return FormulaParser(text, line, col).parse();
  } catch (SyntaxError& e) {
    return std::vector{std::move(e.diagnostic)};
  }
}

std::string_view nearest_rule_name(std::string_view word) {
  std::string_view best = rule_name(kAllRules.front());
  std::size_t best_distance = static_cast<std::size_t>(-1);
  for (Rule r : kAllRules) {
    std::size_t d = edit_distance(word, rule_name(r));
    if (d < best_distance) {
      best = rule_name(r);
      best_distance = d;
    }
  }
  return best;
}

ParseOutcome parse_script(std::string_view input) {
  ParseOutcome out;
  if (!valid_utf8(input)) {
    Diagnostic d;
    d.code = std::string(codes::kInvalidEncoding);
    d.message = "the file is not valid UTF-8";
    d.location = SourceSpan::at(1, 1);
    out.diagnostics.push_back(std::move(d));
    out.recovered = true;
    return out;
  }
  const auto lines = split_lines(strip_bom(input));

  std::size_t i = 0;
  while (i < lines.size() && lines[i].blank()) ++i;

  std::optional<Formula> goal;
  SourceSpan goal_location;
  if (i == lines.size()) {
    Diagnostic d;
    d.code = std::string(codes::kMissingGoal);
    d.message = "the script has no goal formula";
    d.location = SourceSpan::at(1, 1);
    out.diagnostics.push_back(std::move(d));
    return out;
  }

  const std::size_t goal_start = i;
  while (i < lines.size() && !lines[i].blank()) ++i;
  {
    std::string text;
    for (std::size_t k = goal_start; k < i; ++k) {
      if (k > goal_start) text += '\n';
      text += lines[k].raw;
    }
    auto parsed = parse_formula(text, lines[goal_start].number, 1);
    if (auto* f = std::get_if<Formula>(&parsed)) {
      goal = std::move(*f);
      goal_location = {lines[goal_start].number, 1, lines[i - 1].number,
                       lines[i - 1].content.size() + 1};
    } else {
      auto diags = std::get<std::vector<Diagnostic>>(std::move(parsed));
      for (std::size_t k = goal_start + 1; k < i; ++k)
        if (is_rule_line(lines[k])) {
          diags.front().message += "; the goal must be followed by a blank line";
          break;
        }
      out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
      out.recovered = true;
    }
  }

  std::vector<RuleApplication> steps;
  std::optional<std::size_t> first_gap;
  std::optional<std::string> trailing;

  auto gap = [&](std::size_t from) {
    out.recovered = true;
    if (!first_gap) first_gap = steps.size();
    // Skip to the next rule line.
    std::size_t j = from;
    while (j < lines.size() && !is_rule_line(lines[j])) ++j;
    if (j == lines.size()) trailing = join_raw(lines, from, j);
    return j;
  };

  while (i < lines.size()) {
    const Line& line = lines[i];
    if (line.blank()) {
      ++i;
      continue;
    }
    if (!is_rule_line(line)) {
      std::string_view word = line.trimmed();
      bool wordlike = line.indent == 0 && !word.empty() &&
                      std::all_of(word.begin(), word.end(), [](char c) {
                        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                      });
      if (wordlike) {
        out.diagnostics.push_back(located(
            codes::kUnknownRule,
            "unknown rule '" + std::string(word) + "'; did you mean '" +
                std::string(nearest_rule_name(word)) + "'?",
            line));
      } else if (is_plus_line(line)) {
        out.diagnostics.push_back(
            located(codes::kUnexpectedLine, "'+' outside of a Beta rule result", line));
      } else {
        out.diagnostics.push_back(located(
            codes::kUnexpectedLine,
            line.indent == 0 ? "expected a rule name" : "formula line without a rule above it",
            line));
      }
      i = gap(i + 1);
      continue;
    }

    const std::size_t step_start = i;
    RuleApplication app;
    app.rule = *rule_from_name(line.trimmed());
    std::vector<std::vector<const Line*>> blocks;
    std::vector<const Line*> separators;
    std::vector<const Line*> bad_indent;
    ++i;
    while (i < lines.size()) {
      const Line& l = lines[i];
      if (l.blank()) {
        ++i;
        continue;
      }
      if (is_plus_line(l)) {
        if (blocks.empty()) blocks.emplace_back();
        blocks.emplace_back();
        separators.push_back(&l);
      } else if (l.indented()) {
        if (blocks.empty()) blocks.emplace_back();
        blocks.back().push_back(&l);
        if (!formula_indent(l)) bad_indent.push_back(&l);
      } else {
        break;
      }
      ++i;
    }
    std::size_t last_line = i == 0 ? 0 : i - 1;
    while (last_line > step_start && lines[last_line].blank()) --last_line;
    app.location = {line.number, 1, lines[last_line].number,
                    std::max<std::size_t>(lines[last_line].content.size(), 1)};

    std::vector<Diagnostic> errors;
    for (const Line* l : bad_indent)
      errors.push_back(located(codes::kSyntaxError,
                               "formula lines must be indented by at least two spaces", *l));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) {
        const Line& at = b < separators.size() ? *separators[b] : *separators.back();
        errors.push_back(located(codes::kEmptyBranch,
                                 "empty result sequent next to '+'", at));
      }
    }
    for (const auto& block : blocks) {
      Sequent seq;
      for (const Line* l : block) {
        auto parsed = parse_formula(l->content.substr(l->indent), l->number, l->indent + 1);
        if (auto* f = std::get_if<Formula>(&parsed)) {
          seq.push_back(std::move(*f));
        } else {
          auto d = std::get<std::vector<Diagnostic>>(std::move(parsed));
          errors.insert(errors.end(), d.begin(), d.end());
        }
      }
      app.claimed.push_back(std::move(seq));
    }

    if (!errors.empty()) {
      out.diagnostics.insert(out.diagnostics.end(), errors.begin(), errors.end());
      out.recovered = true;
      if (!first_gap) first_gap = steps.size();
      std::size_t j = i;
      while (j < lines.size() && !is_rule_line(lines[j])) ++j;
      if (j == lines.size()) trailing = join_raw(lines, step_start, j);
      i = j;
      continue;
    }
    steps.push_back(std::move(app));
  }

  if (goal) {
    ProofScript script;
    script.goal = std::move(*goal);
    script.goal_location = goal_location;
    script.clean_prefix = first_gap.value_or(steps.size());
    script.steps = std::move(steps);
    script.trailing = std::move(trailing);
    out.script = std::move(script);
  }
  return out;
}

std::string print_term(const Term& t, const std::vector<std::string>& binders) {
  if (t.is_var()) {
    if (t.index < binders.size()) return binders[binders.size() - 1 - t.index];
    return "#" + std::to_string(t.index);
  }
  if (t.args.empty()) return t.symbol;
  std::string out = t.symbol + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += print_term(t.args[i], binders);
  }
  return out + ")";
}

std::string print_formula(const Formula& f) { return Printer(f).print(f, kImp, true); }

std::string print_sequent(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += print_formula(s[i]);
  }
  return out;
}

std::string print_step(const RuleApplication& step) {
  std::string out(rule_name(step.rule));
  out += '\n';
  for (std::size_t b = 0; b < step.claimed.size(); ++b) {
    if (b) out += "+\n";
    for (const auto& f : step.claimed[b]) out += "  " + print_formula(f) + "\n";
  }
  return out;
}

std::string print_script(const ProofScript& script) {
  std::string out = print_formula(script.goal) + "\n\n";
  for (const auto& step : script.steps) out += print_step(step);
  return out;
}

}  // namespace sqc
