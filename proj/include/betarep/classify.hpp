#pragma once

#include <vector>

#include "betarep/places.hpp"

namespace betarep {

struct WeakGreedyVerdict {
    bool admits = false;
    BaseClass base_class;
    /// Expanding roots other than beta and its complex conjugate; empty iff admits.
    std::vector<RootBall> offending_conjugates;
    std::vector<int> offending_roots;
};

/// Throws NotMonic for non-integral bases and NotExpandingPlace when |beta| <= 1.
WeakGreedyVerdict weak_greedy_decision(const PlaceSystem& ps);

}  // namespace betarep
