#include "betarep/classify.hpp"

#include "betarep/error.hpp"

namespace betarep {

WeakGreedyVerdict weak_greedy_decision(const PlaceSystem& ps) {
    if (!ps.field()->min_poly().is_monic()) throw Error(ErrorKind::NotMonic, "weak greedy expansions need an algebraic integer");
    const int dist = ps.distinguished_root();
    if (ps.root_classes()[static_cast<std::size_t>(dist)] != ModulusClass::Expanding) {
        throw Error(ErrorKind::NotExpandingPlace, "|beta| must exceed 1");
    }
    WeakGreedyVerdict out;
    out.base_class = ps.base_class();
    const Place& home = ps.places().front();
    for (int i = 0; i < ps.degree(); ++i) {
        if (i == dist || i == home.conjugate) continue;
        if (ps.root_classes()[static_cast<std::size_t>(i)] != ModulusClass::Expanding) continue;
        out.offending_roots.push_back(i);
        out.offending_conjugates.push_back(ps.roots()[static_cast<std::size_t>(i)]);
    }
    out.admits = out.offending_roots.empty();
    return out;
}

}  // namespace betarep
