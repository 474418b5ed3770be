#pragma once

// Small finite groups given by explicit multiplication tables: generated
// subgroups, the largest normal p-subgroup O_p, and quotients by normal
// subgroups.  Used for component groups and for the twist-theory corpus.

#include <vector>

#include "dmt/base.hpp"

namespace dmt {

struct GroupTable {
    size_t n = 1;
    u32 id = 0;
    std::vector<u32> mul;  // n*n row-major: mul[a*n+b] = a*b

    u32 at(u32 a, u32 b) const { return mul[size_t(a) * n + b]; }
    u32 inv(u32 a) const;
    u64 elem_order(u32 a) const;
};

GroupTable trivial_group_table();
GroupTable cyclic_group_table(u64 k);

// Throws InternalError if the table is not a group (associativity, identity,
// inverses); used to validate constructed tables in tests.
void validate_group_table(const GroupTable& G);

// Sorted element list of the subgroup generated by `gens`.
std::vector<u32> generated_subgroup(const GroupTable& G, const std::vector<u32>& gens);

// Sorted element list of O_p(G), the largest normal p-subgroup: the subgroup
// generated by all elements of p-power order whose normal closure is a
// p-group.
std::vector<u32> op_subgroup(const GroupTable& G, u64 p);

// Quotient by the normal subgroup N (sorted element list).  If coset_of is
// non-null it receives, for each element of G, the index of its coset in the
// quotient table.
GroupTable quotient_table(const GroupTable& G, const std::vector<u32>& N,
                          std::vector<u32>* coset_of = nullptr);

bool is_abelian(const GroupTable& G);
bool is_cyclic(const GroupTable& G);

}  // namespace dmt
