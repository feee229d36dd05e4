//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/smiles.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "molbo/error.h"

namespace molbo {
namespace {
[[noreturn]] void fail(ErrorCode code, std::string_view text, std::size_t pos,
                       const std::string &msg) {
  throw Error(code, msg + " at position " + std::to_string(pos) + " in \""
                        + std::string(text) + "\"");
}

struct RingOpening {
  int atom;
  std::optional<BondOrder> order;
};

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): text_(text) { }

  Molecule parse();

private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void add_atom(Element e, bool aromatic);
  void parse_bracket();
  void ring_closure(int number);
  BondOrder implicit_order(int a, int b) const {
    return aromatic_[a] && aromatic_[b] ? BondOrder::kAromatic
                                         : BondOrder::kSingle;
  }

  std::string_view text_;
  std::size_t pos_ = 0;

  std::vector<Element> atoms_;
  std::vector<char> aromatic_;
  std::vector<Bond> bonds_;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::vector<std::pair<int, std::size_t>> branches_;  // atom, atoms at open
  std::map<int, RingOpening> rings_;
};

void SmilesParser::add_atom(Element e, bool aromatic) {
  const int idx = static_cast<int>(atoms_.size());
  atoms_.push_back(e);
  aromatic_.push_back(aromatic ? 1 : 0);
  if (prev_ >= 0) {
    bonds_.push_back({ prev_, idx, pending_.value_or(implicit_order(prev_, idx)) });
  } else if (pending_) {
    fail(ErrorCode::kUnknownToken, text_, pos_, "bond symbol without atom");
  }
  pending_.reset();
  prev_ = idx;
}

void SmilesParser::parse_bracket() {
  const std::size_t start = pos_;
  ++pos_;  // '['
  if (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
    fail(ErrorCode::kUnknownToken, text_, pos_, "isotopes are not supported");

  std::optional<Element> elem;
  bool aromatic = false;
  if (pos_ + 1 < text_.size()) {
    elem = element_from_symbol(text_.substr(pos_, 2));
    if (elem)
      pos_ += 2;
  }
  if (!elem && !at_end()) {
    const char c = peek();
    if (std::isupper(static_cast<unsigned char>(c))) {
      elem = element_from_symbol(text_.substr(pos_, 1));
    } else if (std::islower(static_cast<unsigned char>(c))) {
      const char upper =
          static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      elem = element_from_symbol(std::string_view(&upper, 1));
      if (elem && !element_info(*elem).aromatic_capable)
        elem.reset();
      aromatic = true;
    }
    if (elem)
      ++pos_;
  }
  if (!elem)
    fail(ErrorCode::kUnknownToken, text_, pos_, "unknown bracket element");

  if (!at_end() && peek() == '@')
    fail(ErrorCode::kUnknownToken, text_, pos_, "chirality is not supported");
  if (!at_end() && peek() == 'H') {
    ++pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      ++pos_;
  }
  if (!at_end() && (peek() == '+' || peek() == '-'))
    fail(ErrorCode::kUnknownToken, text_, pos_, "charges are not supported");
  if (!at_end() && peek() == ':')
    fail(ErrorCode::kUnknownToken, text_, pos_, "atom classes are not supported");
  if (at_end() || peek() != ']')
    fail(ErrorCode::kUnknownToken, text_, start, "malformed bracket atom");
  ++pos_;
  add_atom(*elem, aromatic);
}

void SmilesParser::ring_closure(int number) {
  if (prev_ < 0)
    fail(ErrorCode::kUnknownToken, text_, pos_, "ring bond without atom");

  auto it = rings_.find(number);
  if (it == rings_.end()) {
    rings_[number] = { prev_, pending_ };
    pending_.reset();
    return;
  }

  const RingOpening open = it->second;
  rings_.erase(it);
  if (open.order && pending_ && *open.order != *pending_)
    fail(ErrorCode::kUnknownToken, text_, pos_, "conflicting ring bond orders");
  if (open.atom == prev_)
    fail(ErrorCode::kInvalidStructure, text_, pos_, "ring bond to self");
  const BondOrder order =
      open.order ? *open.order : pending_.value_or(implicit_order(open.atom, prev_));
  bonds_.push_back({ open.atom, prev_, order });
  pending_.reset();
}

Molecule SmilesParser::parse() {
  // Trailing whitespace (e.g. from file lines) is not part of the string.
  while (!text_.empty() && std::isspace(static_cast<unsigned char>(text_.back())))
    text_.remove_suffix(1);
  if (text_.empty())
    throw Error(ErrorCode::kInvalidStructure, "empty SMILES");

  while (!at_end()) {
    const char c = peek();
    if (static_cast<unsigned char>(c) >= 0x80)
      fail(ErrorCode::kUnknownToken, text_, pos_, "non-ASCII character");

    switch (c) {
    case 'B':
    case 'C': {
      if (pos_ + 1 < text_.size()) {
        const char next = text_[pos_ + 1];
        if ((c == 'B' && next == 'r') || (c == 'C' && next == 'l')) {
          add_atom(c == 'B' ? Element::kBr : Element::kCl, false);
          pos_ += 2;
          break;
        }
      }
      add_atom(c == 'B' ? Element::kB : Element::kC, false);
      ++pos_;
      break;
    }
    case 'N':
      add_atom(Element::kN, false);
      ++pos_;
      break;
    case 'O':
      add_atom(Element::kO, false);
      ++pos_;
      break;
    case 'P':
      add_atom(Element::kP, false);
      ++pos_;
      break;
    case 'S':
      add_atom(Element::kS, false);
      ++pos_;
      break;
    case 'F':
      add_atom(Element::kF, false);
      ++pos_;
      break;
    case 'I':
      add_atom(Element::kI, false);
      ++pos_;
      break;
    case 'b':
      add_atom(Element::kB, true);
      ++pos_;
      break;
    case 'c':
      add_atom(Element::kC, true);
      ++pos_;
      break;
    case 'n':
      add_atom(Element::kN, true);
      ++pos_;
      break;
    case 'o':
      add_atom(Element::kO, true);
      ++pos_;
      break;
    case 'p':
      add_atom(Element::kP, true);
      ++pos_;
      break;
    case 's':
      add_atom(Element::kS, true);
      ++pos_;
      break;
    case '[':
      parse_bracket();
      break;
    case '(':
      if (prev_ < 0)
        fail(ErrorCode::kUnbalancedBranch, text_, pos_, "branch without atom");
      if (pending_)
        fail(ErrorCode::kUnknownToken, text_, pos_, "bond symbol before branch");
      branches_.emplace_back(prev_, atoms_.size());
      ++pos_;
      break;
    case ')':
      if (branches_.empty())
        fail(ErrorCode::kUnbalancedBranch, text_, pos_, "unmatched ')'");
      if (pending_)
        fail(ErrorCode::kUnknownToken, text_, pos_, "dangling bond symbol");
      if (branches_.back().second == atoms_.size())
        fail(ErrorCode::kUnbalancedBranch, text_, pos_, "empty branch");
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
      break;
    case '-':
    case '=':
    case '#':
    case ':':
      if (prev_ < 0 || pending_)
        fail(ErrorCode::kUnknownToken, text_, pos_, "unexpected bond symbol");
      pending_ = c == '-'   ? BondOrder::kSingle
                 : c == '=' ? BondOrder::kDouble
                 : c == '#' ? BondOrder::kTriple
                            : BondOrder::kAromatic;
      ++pos_;
      break;
    case '%': {
      if (pos_ + 2 >= text_.size()
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
        fail(ErrorCode::kUnknownToken, text_, pos_, "malformed %nn ring bond");
      const int number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      ring_closure(number);
      pos_ += 3;
      break;
    }
    case '.':
      fail(ErrorCode::kMultiFragmentInput, text_, pos_,
           "multi-fragment input is not supported");
    default:
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_closure(c - '0');
        ++pos_;
        break;
      }
      fail(ErrorCode::kUnknownToken, text_, pos_,
           std::string("unexpected character '") + c + "'");
    }
  }

  if (pending_)
    fail(ErrorCode::kUnknownToken, text_, pos_, "dangling bond symbol");
  if (!branches_.empty())
    fail(ErrorCode::kUnbalancedBranch, text_, pos_, "unclosed branch");
  if (!rings_.empty()) {
    fail(ErrorCode::kUnclosedRing, text_, pos_,
         "ring bond " + std::to_string(rings_.begin()->first) + " never closed");
  }

  Molecule mol(std::move(atoms_), std::move(bonds_));
  return heavy_skeleton(mol);
}

// Two-pass writer: a DFS classifies bonds into tree edges and ring closures,
// then the string is emitted in DFS preorder.
class SmilesWriter {
public:
  SmilesWriter(const Molecule &mol, std::span<const int> ranks)
      : mol_(mol), ranks_(ranks), visited_(mol.size(), 0),
        children_(mol.size()), rings_(mol.size()),
        ring_bond_seen_(mol.num_bonds(), 0), ring_digit_(mol.num_bonds(), -1) { }

  std::string write();

private:
  struct RingEnd {
    int partner;
    int bond;
    bool opening;
  };

  std::vector<Neighbor> sorted_heavy_neighbors(int u) const;
  void classify(int u, int parent);
  void emit(int u);
  bool lower(int u) const {
    return mol_.is_aromatic(u) && element_info(mol_.element(u)).aromatic_capable;
  }
  std::string bond_text(int u, int v, BondOrder order) const;
  int allocate_digit();

  const Molecule &mol_;
  std::span<const int> ranks_;
  std::vector<char> visited_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<RingEnd>> rings_;
  std::vector<char> ring_bond_seen_;
  std::vector<int> ring_digit_;
  std::vector<char> digit_used_;
  std::string out_;
};

std::vector<Neighbor> SmilesWriter::sorted_heavy_neighbors(int u) const {
  std::vector<Neighbor> nbrs;
  for (const Neighbor &nb: mol_.neighbors(u)) {
    if (mol_.element(nb.atom) != Element::kH)
      nbrs.push_back(nb);
  }
  std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor &a, const Neighbor &b) {
    return ranks_[a.atom] < ranks_[b.atom];
  });
  return nbrs;
}

void SmilesWriter::classify(int u, int parent) {
  visited_[u] = 1;
  for (const Neighbor &nb: sorted_heavy_neighbors(u)) {
    if (nb.atom == parent)
      continue;
    if (visited_[nb.atom]) {
      if (!ring_bond_seen_[nb.bond]) {
        ring_bond_seen_[nb.bond] = 1;
        rings_[nb.atom].push_back({ u, nb.bond, true });
        rings_[u].push_back({ nb.atom, nb.bond, false });
      }
      continue;
    }
    children_[u].push_back(nb);
    classify(nb.atom, u);
  }
}

std::string SmilesWriter::bond_text(int u, int v, BondOrder order) const {
  const bool both_lower = lower(u) && lower(v);
  switch (order) {
  case BondOrder::kSingle:
    return both_lower ? "-" : "";
  case BondOrder::kAromatic:
    return both_lower ? "" : ":";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  }
  return "";
}

int SmilesWriter::allocate_digit() {
  for (std::size_t d = 1; d < digit_used_.size(); ++d) {
    if (!digit_used_[d]) {
      digit_used_[d] = 1;
      return static_cast<int>(d);
    }
  }
  digit_used_.resize(std::max<std::size_t>(digit_used_.size() + 1, 2), 0);
  digit_used_.back() = 1;
  return static_cast<int>(digit_used_.size()) - 1;
}

void SmilesWriter::emit(int u) {
  const Element e = mol_.element(u);
  if (lower(u)) {
    std::string sym(symbol(e));
    for (char &c: sym)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out_ += sym;
  } else {
    out_ += symbol(e);
  }

  auto digit_text = [](int d) {
    return d < 10 ? std::to_string(d)
                  : (d < 100 ? "%" + std::to_string(d)
                             : throw Error(ErrorCode::kInvalidStructure,
                                           "too many open rings"));
  };

  // Closings release their digits before new rings open at this atom.
  std::vector<RingEnd> ends = rings_[u];
  std::stable_sort(ends.begin(), ends.end(), [&](const RingEnd &a, const RingEnd &b) {
    if (a.opening != b.opening)
      return !a.opening;
    return ranks_[a.partner] < ranks_[b.partner];
  });
  for (const RingEnd &r: ends) {
    if (r.opening)
      continue;
    const int d = ring_digit_[r.bond];
    out_ += digit_text(d);
    digit_used_[d] = 0;
  }
  for (const RingEnd &r: ends) {
    if (!r.opening)
      continue;
    const int d = allocate_digit();
    ring_digit_[r.bond] = d;
    out_ += bond_text(u, r.partner, mol_.bonds()[r.bond].order);
    out_ += digit_text(d);
  }

  const auto &kids = children_[u];
  for (std::size_t k = 0; k < kids.size(); ++k) {
    const bool branch = k + 1 < kids.size();
    if (branch)
      out_ += '(';
    out_ += bond_text(u, kids[k].atom, kids[k].order);
    emit(kids[k].atom);
    if (branch)
      out_ += ')';
  }
}

std::string SmilesWriter::write() {
  int start = -1;
  for (int i = 0; i < mol_.size(); ++i) {
    if (mol_.element(i) == Element::kH)
      continue;
    if (start < 0 || ranks_[i] < ranks_[start])
      start = i;
  }
  digit_used_.assign(1, 1);  // digit 0 is never used
  classify(start, -1);
  emit(start);
  return out_;
}
}  // namespace

namespace internal {
std::string write_smiles_ranked(const Molecule &mol, std::span<const int> ranks) {
  return SmilesWriter(mol, ranks).write();
}
}  // namespace internal

Molecule parse_smiles(std::string_view text) {
  return SmilesParser(text).parse();
}

std::string write_smiles(const Molecule &mol) {
  return mol.canonical_form();
}

std::vector<Molecule> read_pool(std::istream &is) {
  std::vector<Molecule> pool;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || line[first] == '#')
      continue;
    auto last = line.find_last_not_of(" \t\r\n");
    try {
      pool.push_back(parse_smiles(
          std::string_view(line).substr(first, last - first + 1)));
    } catch (const Error &e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pool;
}

std::vector<Molecule> read_pool_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::kIoError, "cannot open pool file " + path.string());
  return read_pool(is);
}

}  // namespace molbo
