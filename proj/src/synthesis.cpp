//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/synthesis.h"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include "molbo/error.h"
#include "molbo/smiles.h"

namespace molbo {
namespace {
constexpr std::array<std::string_view, 6> kConditionNames = {
  "acid_cat", "base", "heat", "pd_cat", "neat", "join"
};

constexpr std::string_view kJoinTemplate = "join";

// A reactive site: `attach` forms the new bond, `leaving` (if >= 0) is a
// terminal heavy atom dropped with the byproduct.
struct Site {
  int attach;
  int leaving;
};

using SiteFinder = std::function<std::vector<Site>(const Molecule &)>;

// C=O with a terminal oxygen.
bool is_carbonyl_carbon(const Molecule &m, int c) {
  if (m.element(c) != Element::kC)
    return false;
  for (const Neighbor &n: m.neighbors(c)) {
    if (m.element(n.atom) == Element::kO && n.order == BondOrder::kDouble)
      return true;
  }
  return false;
}

int terminal_double_oxygen(const Molecule &m, int c) {
  for (const Neighbor &n: m.neighbors(c)) {
    if (m.element(n.atom) == Element::kO && n.order == BondOrder::kDouble
        && m.heavy_degree(n.atom) == 1)
      return n.atom;
  }
  return -1;
}

// -C(=O)O[H]: attach at the carbon, the hydroxyl oxygen leaves.
std::vector<Site> acid_sites(const Molecule &m) {
  std::vector<Site> out;
  for (int c = 0; c < m.size(); ++c) {
    if (m.element(c) != Element::kC || m.is_aromatic(c)
        || terminal_double_oxygen(m, c) < 0)
      continue;
    for (const Neighbor &n: m.neighbors(c)) {
      if (m.element(n.atom) == Element::kO && n.order == BondOrder::kSingle
          && m.heavy_degree(n.atom) == 1 && m.implicit_hydrogens(n.atom) >= 1) {
        out.push_back({ c, n.atom });
        break;
      }
    }
  }
  return out;
}

// R-O[H] on a carbon that is not a carbonyl carbon.
std::vector<Site> alcohol_sites(const Molecule &m) {
  std::vector<Site> out;
  for (int o = 0; o < m.size(); ++o) {
    if (m.element(o) != Element::kO || m.heavy_degree(o) != 1
        || m.implicit_hydrogens(o) < 1)
      continue;
    const Neighbor &n = m.neighbors(o)[0];
    if (m.element(n.atom) == Element::kC && n.order == BondOrder::kSingle
        && !is_carbonyl_carbon(m, n.atom))
      out.push_back({ o, -1 });
  }
  return out;
}

// R-N[H2] on a non-carbonyl carbon.
std::vector<Site> primary_amine_sites(const Molecule &m) {
  std::vector<Site> out;
  for (int a = 0; a < m.size(); ++a) {
    if (m.element(a) != Element::kN || m.heavy_degree(a) != 1
        || m.implicit_hydrogens(a) != 2)
      continue;
    const Neighbor &n = m.neighbors(a)[0];
    if (m.element(n.atom) == Element::kC && n.order == BondOrder::kSingle
        && !is_carbonyl_carbon(m, n.atom))
      out.push_back({ a, -1 });
  }
  return out;
}

// Saturated N-H not attached to a carbonyl carbon.
std::vector<Site> amine_sites(const Molecule &m) {
  std::vector<Site> out;
  for (int a = 0; a < m.size(); ++a) {
    if (m.element(a) != Element::kN || m.is_aromatic(a) || m.implicit_hydrogens(a) < 1)
      continue;
    bool ok = true;
    for (const Neighbor &n: m.neighbors(a)) {
      if (n.order != BondOrder::kSingle || is_carbonyl_carbon(m, n.atom))
        ok = false;
    }
    if (ok)
      out.push_back({ a, -1 });
  }
  return out;
}

// Non-aromatic C-X with X in {Cl, Br, I}: attach at carbon, halogen leaves.
std::vector<Site> halide_sites(const Molecule &m) {
  std::vector<Site> out;
  for (int x = 0; x < m.size(); ++x) {
    const Element e = m.element(x);
    if ((e != Element::kCl && e != Element::kBr && e != Element::kI)
        || m.heavy_degree(x) != 1)
      continue;
    const Neighbor &n = m.neighbors(x)[0];
    if (m.element(n.atom) == Element::kC && !m.is_aromatic(n.atom)
        && n.order == BondOrder::kSingle)
      out.push_back({ n.atom, x });
  }
  return out;
}

// H-C=O on a non-aromatic carbon: attach at carbon, oxygen leaves.
std::vector<Site> aldehyde_sites(const Molecule &m) {
  std::vector<Site> out;
  for (int c = 0; c < m.size(); ++c) {
    if (m.element(c) != Element::kC || m.is_aromatic(c) || m.implicit_hydrogens(c) < 1)
      continue;
    const int o = terminal_double_oxygen(m, c);
    if (o >= 0)
      out.push_back({ c, o });
  }
  return out;
}

// Lowest canonical rank of the bonding atom, then of the leaving atom.
std::optional<Site> first_site(const Molecule &m, const SiteFinder &finder) {
  const std::vector<Site> sites = finder(m);
  if (sites.empty())
    return std::nullopt;
  const auto ranks = m.canonical_ranks();
  auto key = [&](const Site &s) {
    return std::make_pair(ranks[s.attach], s.leaving < 0 ? -1 : ranks[s.leaving]);
  };
  return *std::min_element(sites.begin(), sites.end(), [&](const Site &a, const Site &b) {
    return key(a) < key(b);
  });
}

// Joins two heavy graphs with one new bond after deleting leaving atoms.
std::optional<Molecule> combine(const Molecule &a, Site sa, const Molecule &b, Site sb,
                                BondOrder order) {
  std::vector<Element> atoms;
  std::vector<Bond> bonds;
  auto append = [&](const Molecule &m, int leaving) {
    std::vector<int> map(m.size(), -1);
    for (int i = 0; i < m.size(); ++i) {
      if (i == leaving)
        continue;
      map[i] = static_cast<int>(atoms.size());
      atoms.push_back(m.element(i));
    }
    for (const Bond &bd: m.bonds()) {
      if (map[bd.begin] >= 0 && map[bd.end] >= 0)
        bonds.push_back({ map[bd.begin], map[bd.end], bd.order });
    }
    return map;
  };
  const auto ma = append(a, sa.leaving);
  const auto mb = append(b, sb.leaving);
  bonds.push_back({ ma[sa.attach], mb[sb.attach], order });
  try {
    return Molecule(std::move(atoms), std::move(bonds));
  } catch (const Error &) {
    return std::nullopt;
  }
}

struct Template {
  std::string_view name;
  SiteFinder first;
  SiteFinder second;
  ConditionSet required;
  BondOrder order;
};

const std::vector<Template> &library() {
  static const std::vector<Template> lib = {
    { "esterification", acid_sites, alcohol_sites, { Condition::kAcidCat },
      BondOrder::kSingle },
    { "amide_coupling", acid_sites, primary_amine_sites, { Condition::kHeat },
      BondOrder::kSingle },
    { "williamson_ether", alcohol_sites, halide_sites, { Condition::kBase },
      BondOrder::kSingle },
    { "imine_formation", aldehyde_sites, primary_amine_sites, { Condition::kAcidCat },
      BondOrder::kDouble },
    { "n_alkylation", amine_sites, halide_sites, { Condition::kBase },
      BondOrder::kSingle },
  };
  return lib;
}

constexpr std::array<std::string_view, 5> kTemplateNames = {
  "esterification", "amide_coupling", "williamson_ether", "imine_formation",
  "n_alkylation"
};

std::optional<SynthesisOutcome> template_oracle(std::span<const Molecule> reagents,
                                                ConditionSet conditions) {
  const int n = static_cast<int>(reagents.size());
  for (const Template &t: library()) {
    if (!conditions.contains_all(t.required))
      continue;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j)
          continue;
        const auto si = first_site(reagents[i], t.first);
        if (!si)
          break;
        const auto sj = first_site(reagents[j], t.second);
        if (!sj)
          continue;
        if (auto p = combine(reagents[i], *si, reagents[j], *sj, t.order))
          return SynthesisOutcome { std::string(t.name), { i, j }, { std::move(*p) } };
      }
    }
  }
  return std::nullopt;
}

std::optional<int> join_atom(const Molecule &m) {
  const auto ranks = m.canonical_ranks();
  int best = -1;
  for (int i = 0; i < m.size(); ++i) {
    if (m.element(i) == Element::kH || m.implicit_hydrogens(i) < 1)
      continue;
    if (best < 0 || ranks[i] < ranks[best])
      best = i;
  }
  if (best < 0)
    return std::nullopt;
  return best;
}

std::optional<SynthesisOutcome> join_oracle(std::span<const Molecule> reagents,
                                            ConditionSet conditions) {
  if (reagents.size() != 2 || !conditions.contains(Condition::kJoin))
    return std::nullopt;
  const auto a = join_atom(reagents[0]);
  const auto b = join_atom(reagents[1]);
  if (!a || !b)
    return std::nullopt;
  auto p = combine(reagents[0], { *a, -1 }, reagents[1], { *b, -1 }, BondOrder::kSingle);
  if (!p)
    return std::nullopt;
  return SynthesisOutcome { std::string(kJoinTemplate), { 0, 1 }, { std::move(*p) } };
}

[[noreturn]] void unknown(std::string_view what) {
  throw Error(ErrorCode::kUnknownMolecule, "molecule not in synthesis graph: "
                                               + std::string(what));
}
}  // namespace

std::string_view condition_name(Condition c) {
  return kConditionNames[static_cast<std::size_t>(c)];
}

Condition parse_condition(std::string_view name) {
  for (std::size_t i = 0; i < kConditionNames.size(); ++i) {
    if (kConditionNames[i] == name)
      return static_cast<Condition>(i);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown condition '" + std::string(name) + "'");
}

int ConditionSet::size() const { return std::popcount(bits_); }

std::vector<Condition> ConditionSet::members() const {
  std::vector<Condition> out;
  for (Condition c: kAllConditions) {
    if (contains(c))
      out.push_back(c);
  }
  return out;
}

std::vector<std::string> ConditionSet::names() const {
  std::vector<std::string> out;
  for (Condition c: members())
    out.emplace_back(condition_name(c));
  return out;
}

std::string_view oracle_name(OracleKind kind) {
  return kind == OracleKind::kTemplate ? "template" : "join";
}

OracleKind parse_oracle(std::string_view name) {
  if (name == "template")
    return OracleKind::kTemplate;
  if (name == "join")
    return OracleKind::kJoin;
  throw Error(ErrorCode::kInvalidConfig,
              "oracle: expected template or join, got '" + std::string(name) + "'");
}

std::span<const std::string_view> template_names() { return kTemplateNames; }

std::optional<SynthesisOutcome> synthesize(std::span<const Molecule> reagents,
                                           ConditionSet conditions, OracleKind oracle) {
  if (reagents.empty() || reagents.size() > 3)
    throw Error(ErrorCode::kInvalidConfig, "synthesize: expected 1 to 3 reagents");
  if (conditions.empty())
    return std::nullopt;
  return oracle == OracleKind::kTemplate ? template_oracle(reagents, conditions)
                                         : join_oracle(reagents, conditions);
}

void SynthesisDag::add_initial(const Molecule &mol) {
  const std::string &key = mol.canonical_form();
  if (nodes_.count(key))
    return;
  nodes_.emplace(key, SynthesisNode { key, {}, std::nullopt, {}, 0 });
}

std::vector<std::string> SynthesisDag::record(std::span<const Molecule> products,
                                              std::span<const std::string> parents,
                                              const std::string &template_name,
                                              ConditionSet conditions, int step) {
  for (const std::string &p: parents) {
    const SynthesisNode &parent = node(p);
    if (step <= parent.step)
      throw Error(ErrorCode::kCycleDetected,
                  "step " + std::to_string(step) + " does not follow parent " + p);
  }
  std::vector<std::string> added;
  for (const Molecule &m: products) {
    const std::string &key = m.canonical_form();
    if (nodes_.count(key))
      continue;
    nodes_.emplace(key, SynthesisNode { key,
                                        std::vector<std::string>(parents.begin(),
                                                                 parents.end()),
                                        template_name, conditions, step });
    added.push_back(key);
  }
  return added;
}

bool SynthesisDag::contains(std::string_view canonical) const {
  return nodes_.find(canonical) != nodes_.end();
}

const SynthesisNode &SynthesisDag::node(std::string_view canonical) const {
  auto it = nodes_.find(canonical);
  if (it == nodes_.end())
    unknown(canonical);
  return it->second;
}

Recipe SynthesisDag::recipe(std::string_view target) const {
  const SynthesisNode &root = node(target);
  std::set<std::string, std::less<>> seen { root.molecule };
  std::deque<const SynthesisNode *> queue { &root };
  Recipe r;
  r.target = root.molecule;
  std::vector<const SynthesisNode *> reactions;
  while (!queue.empty()) {
    const SynthesisNode *n = queue.front();
    queue.pop_front();
    if (n->parents.empty()) {
      r.initial_reagents.push_back(n->molecule);
      continue;
    }
    reactions.push_back(n);
    for (const std::string &p: n->parents) {
      if (seen.insert(p).second)
        queue.push_back(&node(p));
    }
  }
  std::sort(r.initial_reagents.begin(), r.initial_reagents.end());
  // Steps strictly increase along edges, so sorting by step is topological.
  std::sort(reactions.begin(), reactions.end(),
            [](const SynthesisNode *a, const SynthesisNode *b) {
              return std::tie(a->step, a->molecule) < std::tie(b->step, b->molecule);
            });
  for (const SynthesisNode *n: reactions) {
    r.steps.push_back({ n->molecule, n->parents, n->template_name.value_or(""),
                        n->conditions, n->step });
  }
  return r;
}

nlohmann::json node_to_json(const SynthesisNode &n) {
  return { { "molecule", n.molecule },
           { "parents", n.parents },
           { "template", n.template_name ? nlohmann::json(*n.template_name)
                                         : nlohmann::json(nullptr) },
           { "conditions", n.conditions.names() },
           { "step", n.step } };
}

nlohmann::json SynthesisDag::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto &[key, n]: nodes_)
    nodes.push_back(node_to_json(n));
  return { { "nodes", nodes } };
}

SynthesisDag SynthesisDag::from_json(const nlohmann::json &j) {
  SynthesisDag dag;
  try {
    for (const auto &n: j.at("nodes")) {
      SynthesisNode node;
      node.molecule = n.at("molecule").get<std::string>();
      node.parents = n.at("parents").get<std::vector<std::string>>();
      if (!n.at("template").is_null())
        node.template_name = n.at("template").get<std::string>();
      for (const auto &c: n.at("conditions"))
        node.conditions.insert(parse_condition(c.get<std::string>()));
      node.step = n.at("step").get<int>();
      dag.nodes_.emplace(node.molecule, std::move(node));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("synthesis graph: ") + e.what());
  }
  for (const auto &[key, n]: dag.nodes_) {
    for (const std::string &p: n.parents) {
      if (!dag.contains(p))
        unknown(p);
    }
  }
  return dag;
}

nlohmann::json recipe_to_json(const Recipe &recipe) {
  nlohmann::json steps = nlohmann::json::array();
  for (const RecipeStep &s: recipe.steps) {
    steps.push_back({ { "molecule", s.molecule },
                      { "parents", s.parents },
                      { "template", s.template_name },
                      { "conditions", s.conditions.names() },
                      { "step", s.step } });
  }
  return { { "target", recipe.target },
           { "initial_pool", recipe.initial_reagents },
           { "steps", steps } };
}

std::string recipe_to_graph_text(const Recipe &recipe) {
  std::ostringstream os;
  for (const std::string &m: recipe.initial_reagents)
    os << "node " << m << " step=0 pool\n";
  for (const RecipeStep &s: recipe.steps)
    os << "node " << s.molecule << " step=" << s.step << "\n";
  for (const RecipeStep &s: recipe.steps) {
    std::string conds;
    for (const std::string &c: s.conditions.names())
      conds += (conds.empty() ? "" : ",") + c;
    for (const std::string &p: s.parents) {
      os << "edge " << p << " -> " << s.molecule << " template=" << s.template_name
         << " conditions=" << conds << "\n";
    }
  }
  return os.str();
}

bool replay_recipe(const Recipe &recipe, OracleKind oracle) {
  for (const RecipeStep &s: recipe.steps) {
    std::vector<Molecule> reagents;
    for (const std::string &p: s.parents)
      reagents.push_back(parse_smiles(p));
    const auto out = synthesize(reagents, s.conditions, oracle);
    if (!out || out->template_name != s.template_name)
      return false;
    const bool found = std::any_of(out->products.begin(), out->products.end(),
                                   [&](const Molecule &m) {
                                     return m.canonical_form() == s.molecule;
                                   });
    if (!found)
      return false;
  }
  return true;
}

}  // namespace molbo
