#pragma once

#include <string>
#include <vector>

#include "sfverify/impl_ir.hpp"

namespace sfv::refine {

enum class MutationKind { ConstantSwap, GuardFlip, DropAssignment, DropBranch };

std::string to_string(MutationKind k);

struct Mutant {
  std::string id;  // "<kind>-<n>", stable for a given program
  MutationKind kind = MutationKind::ConstantSwap;
  std::string function;
  std::string description;
  ir::ImplProgram program;
};

/// Every single-site mutant of `p`, in function order then preorder:
/// a named `IN_`/`EV_` constant replaced by one of a different value, a
/// guard negated, an assignment removed, an arm or else branch removed.
/// The initialize function is left alone: every field starts at zero
/// anyway, so its mutants would be equivalent to the original.
std::vector<Mutant> mutants(const ir::ImplProgram& p);

}  // namespace sfv::refine
