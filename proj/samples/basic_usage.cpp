// Walks through the main library calls on a small salary table.

#include <iostream>
#include <sstream>

#include "apdep/apdep.hpp"

int main() {
  using namespace apdep;

  std::istringstream csv(
      "Employee,Department,Salary\n"
      "John,I,120000\nMary,II,130000\nAnn,I,120000\n"
      "Paul,I,120000\nMatt,II,130000\nJulia,I,130000\n");
  const MultiTeam team = load_team_csv(csv).team;

  const Atom atom = parse_atom("dep[1/6](Department ; Salary)");
  const auto result = satisfies_approx(team, atom.p, atom.lhs, atom.rhs);
  std::cout << format_atom(atom) << (result ? " holds" : " fails") << ", minimal error "
            << minimal_error(team, atom.lhs, atom.rhs).value().fraction() << "\n";

  const SigmaSet sigma = parse_sigma("dep[1/4](x ; y)\ndep[1/2](y ; z)\n");
  const Atom goal = parse_atom("dep[3/4](x ; z)");
  if (const auto proof = derives(sigma, goal)) {
    std::cout << "proof of " << format_atom(goal) << " with " << proof->steps.size() << " steps, "
              << (check_derivation(*proof, sigma) ? "checks" : "does not check") << "\n";
  }

  const Atom weaker = parse_atom("dep[1/2](x ; z)");
  if (const auto cm = find_countermodel(sigma, weaker)) {
    std::cout << "countermodel for " << format_atom(weaker) << ":\n";
    write_team_csv(std::cout, cm->team);
  }

  for (const auto& r : mine(team, 1, ErrorRate(1, 6)))
    std::cout << (r.lhs.empty() ? "∅" : join_names(r.lhs)) << " -> " << r.rhs.name << "  "
              << r.error.value().fraction() << "\n";
}
