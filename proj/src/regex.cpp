#include "symmod/regex.hpp"

#include <set>

#include "symmod/error.hpp"

namespace symmod {

namespace {

RegexPtr node(Regex::Kind k, std::vector<RegexPtr> subs = {}, int letter = 0) {
  auto r = std::make_shared<Regex>();
  r->kind = k;
  r->letter = letter;
  r->subs = std::move(subs);
  return r;
}

class RegexParser {
 public:
  explicit RegexParser(const std::string& s) : s_(s) {}

  RegexPtr parse() {
    RegexPtr r = alt();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError("regex \"" + s_ + "\" at " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  bool eat(const char* tok) {
    skip();
    size_t n = std::char_traits<char>::length(tok);
    if (s_.compare(pos_, n, tok) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  RegexPtr alt() {
    std::vector<RegexPtr> parts{concat()};
    while (eat("|")) parts.push_back(concat());
    return parts.size() == 1 ? parts[0] : node(Regex::Kind::Alt, std::move(parts));
  }

  bool at_atom_start() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return (c >= '0' && c <= '9') || c == '(' || c == '<' || s_.compare(pos_, 2, "\xCE\xB5") == 0;
  }

  RegexPtr concat() {
    std::vector<RegexPtr> parts;
    while (true) {
      if (eat(".") || eat("\xC2\xB7")) {
        if (!at_atom_start()) fail("expected an operand after concatenation");
        continue;
      }
      if (!at_atom_start()) break;
      parts.push_back(postfix());
    }
    if (parts.empty()) return node(Regex::Kind::Eps);
    return parts.size() == 1 ? parts[0] : node(Regex::Kind::Concat, std::move(parts));
  }

  RegexPtr postfix() {
    RegexPtr r = atom();
    while (true) {
      if (eat("^*") || eat("*")) {
        r = node(Regex::Kind::Star, {r});
      } else if (eat("^+") || eat("+")) {
        r = node(Regex::Kind::Concat, {r, node(Regex::Kind::Star, {r})});
      } else if (eat("?")) {
        r = node(Regex::Kind::Alt, {r, node(Regex::Kind::Eps)});
      } else {
        return r;
      }
    }
  }

  RegexPtr atom() {
    skip();
    char c = s_[pos_];
    if (c >= '0' && c <= '9') {
      ++pos_;
      return node(Regex::Kind::Letter, {}, c - '0');
    }
    if (eat("\xCE\xB5")) return node(Regex::Kind::Eps);
    if (c == '<') {
      size_t j = ++pos_;
      while (j < s_.size() && s_[j] >= '0' && s_[j] <= '9') ++j;
      if (j == pos_ || j >= s_.size() || s_[j] != '>') fail("expected <digits>");
      int l = std::stoi(s_.substr(pos_, j - pos_));
      pos_ = j + 1;
      return node(Regex::Kind::Letter, {}, l);
    }
    ++pos_;
    RegexPtr r = alt();
    if (!eat(")")) fail("missing ')'");
    return r;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

struct Glushkov {
  std::vector<int> letters;               // letter of each position
  std::vector<std::set<int>> follow;

  struct Info {
    bool nullable;
    std::set<int> first, last;
  };

  Info walk(const RegexPtr& r) {
    switch (r->kind) {
      case Regex::Kind::Eps:
        return {true, {}, {}};
      case Regex::Kind::Letter: {
        int p = static_cast<int>(letters.size());
        letters.push_back(r->letter);
        follow.emplace_back();
        return {false, {p}, {p}};
      }
      case Regex::Kind::Alt: {
        Info out{false, {}, {}};
        for (const auto& s : r->subs) {
          Info i = walk(s);
          out.nullable = out.nullable || i.nullable;
          out.first.insert(i.first.begin(), i.first.end());
          out.last.insert(i.last.begin(), i.last.end());
        }
        return out;
      }
      case Regex::Kind::Concat: {
        Info out{true, {}, {}};
        for (const auto& s : r->subs) {
          Info i = walk(s);
          for (int p : out.last) follow[p].insert(i.first.begin(), i.first.end());
          if (out.nullable) out.first.insert(i.first.begin(), i.first.end());
          if (i.nullable)
            out.last.insert(i.last.begin(), i.last.end());
          else
            out.last = i.last;
          out.nullable = out.nullable && i.nullable;
        }
        return out;
      }
      case Regex::Kind::Star: {
        Info i = walk(r->subs[0]);
        for (int p : i.last) follow[p].insert(i.first.begin(), i.first.end());
        return {true, i.first, i.last};
      }
    }
    return {true, {}, {}};
  }
};

void print(const RegexPtr& r, std::string& out, int prec) {
  // prec: 0 alternation, 1 concatenation, 2 postfix operand
  switch (r->kind) {
    case Regex::Kind::Eps:
      out += "()";
      return;
    case Regex::Kind::Letter:
      out += r->letter < 10 ? std::to_string(r->letter) : "<" + std::to_string(r->letter) + ">";
      return;
    case Regex::Kind::Star:
      print(r->subs[0], out, 2);
      out += "*";
      return;
    case Regex::Kind::Concat:
    case Regex::Kind::Alt: {
      const bool is_alt = r->kind == Regex::Kind::Alt;
      const int mine = is_alt ? 0 : 1;
      if (prec > mine) out += "(";
      for (size_t i = 0; i < r->subs.size(); ++i) {
        if (i) out += is_alt ? "|" : "";
        print(r->subs[i], out, mine + 1);
      }
      if (prec > mine) out += ")";
      return;
    }
  }
}

}  // namespace

RegexPtr parse_regex(const std::string& text) { return RegexParser(text).parse(); }

std::string to_string(const RegexPtr& r) {
  std::string out;
  print(r, out, 0);
  return out;
}

int max_letter(const RegexPtr& r) {
  int m = r->kind == Regex::Kind::Letter ? r->letter : -1;
  for (const auto& s : r->subs) m = std::max(m, max_letter(s));
  return m;
}

SyncAutomaton regex_to_automaton(const RegexPtr& r, int ell) {
  if (max_letter(r) > ell)
    throw Error("regex /" + to_string(r) + "/ uses letter " + std::to_string(max_letter(r)) +
                " outside the alphabet 0.." + std::to_string(ell));
  Glushkov g;
  Glushkov::Info info = g.walk(r);
  const int n = static_cast<int>(g.letters.size());
  // state 0 is the start, state p+1 is position p
  std::vector<std::vector<SyncAutomaton::Edge>> nfa(n + 1);
  std::vector<bool> acc(n + 1, false);
  acc[0] = info.nullable;
  for (int p : info.first) nfa[0].push_back({static_cast<Symbol>(g.letters[p]), p + 1});
  for (int p = 0; p < n; ++p) {
    for (int q : g.follow[p]) nfa[p + 1].push_back({static_cast<Symbol>(g.letters[q]), q + 1});
    acc[p + 1] = info.last.count(p) > 0;
  }
  return minimize(determinize(1, ell, nfa, acc, {0}));
}

SyncAutomaton regex_to_automaton(const std::string& text, int ell) {
  return regex_to_automaton(parse_regex(text), ell);
}

}  // namespace symmod
