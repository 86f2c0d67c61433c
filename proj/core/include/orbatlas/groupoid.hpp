#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbatlas/finspace.hpp"
#include "orbatlas/group.hpp"
#include "orbatlas/report.hpp"

namespace orb {

/// Concrete finite category / groupoid with objects tagged (block, point).
/// Morphisms carry the key data (src block, dst block, carrier point, group
/// label); the meaning of carrier/label is fixed by the builder.
struct GroupoidModel {
    struct Block {
        IndexSet index;
        int offset{};
        int size{};
    };
    struct Mor {
        int src{}, dst{};          // object ids
        int iblk{}, jblk{};        // key blocks
        int carrier{};             // key point (meaning set by builder)
        int label{};               // group element code (meaning set by builder)
    };

    std::vector<Block> blocks;
    FiniteSpace obj_space;         // disjoint union of the block spaces
    std::vector<Mor> mors;
    std::vector<int> identity_of;  // object -> identity morphism id
    bool groupoid_flag{false};

    /// Optional carrier-order on morphism ids (needed by atlas derivation).
    std::optional<FiniteSpace> mor_space;

    int num_objects() const { return obj_space.size(); }
    int num_mors() const { return static_cast<int>(mors.size()); }
    int object(int blk, int local) const { return blocks[blk].offset + local; }
    std::pair<int, int> tag_of(int obj) const;
    std::string obj_name(int obj) const;

    std::vector<std::vector<int>> out_adj() const; // object -> morphisms out
    std::vector<std::vector<int>> in_adj() const;  // object -> morphisms in
};

/// Composition/inversion interface used by the generic law checkers.
/// compose(a, b) means "a then b" (a: x->y, b: y->z), matching the paper's
/// categorical ordering of composites.
struct CatOps {
    const GroupoidModel* model{};
    std::function<std::optional<int>(int, int)> compose;
    std::function<int(int)> invert; // empty when not a groupoid
};

/// Realization |M|: quotient of the object space by "a morphism exists".
struct Realization {
    FiniteSpace space;
    std::vector<int> cls_of; // object -> realization point
};
Realization realize(const GroupoidModel& m);

/// Exhaustive category laws: identities, src/dst consistency of composites,
/// associativity over all composable triples; inverse laws when applicable.
void verify_category_laws(const CatOps& ops, Report& rep, const std::string& tag);

/// DOT export, objects colored per block; caps at max_edges with a notice.
/// Highlighted objects (for instance a branch locus overlay) are drawn with
/// a heavy red border.
void dot_export(const GroupoidModel& m, std::ostream& os, int max_edges = 5000,
                const std::vector<int>& highlight_objects = {});

/// Functor data between two models (object and morphism maps).
struct Functor {
    std::vector<int> obj_map;
    std::vector<int> mor_map;
};
void verify_functor(const CatOps& src, const CatOps& dst, const Functor& f, Report& rep,
                    const std::string& tag);

uint64_t pair_key(int a, int b);

} // namespace orb
