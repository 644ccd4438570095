#ifndef PROGIND_SEARCH_HPP
#define PROGIND_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "progind/ast.hpp"
#include "progind/optimizer.hpp"
#include "progind/parallel.hpp"

namespace progind {

struct SearchConfig {
    OptimizerConfig optimizer;
    ComplexityWeights weights;
    int max_iterations = 1000;
    int top_k = 3;
    std::uint64_t seed = 0;
    int workers = 1;
    double init_variance = 0.1;  // new parameter leaves ~ N(0, init_variance)
};

/// An optimised, scored program. f_total = complexity + loss exactly.
struct Candidate {
    OptimizedCandidate opt;
    double loss = 0.0;
    double complexity = 0.0;
    double f_total = 0.0;
    std::string key;
    std::string parent_key;
    int expansion_leaf = -1;
    std::uint64_t seed = 0;
    int leaf_rank = 0;  // which leaf (by gradient rank) the next expansion uses

    const Program& program() const { return opt.program; }
};

Candidate score(OptimizedCandidate opt, const ComplexityWeights& w);

/// Min-queue on (f_total, complexity, insertion order) with a visited set of
/// canonical keys.
class CandidateQueue {
public:
    void push(Candidate c);
    Candidate pop();
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    /// Marks `key` visited; false if it already was.
    bool visit(const std::string& key) { return visited_.insert(key).second; }
    bool visited(const std::string& key) const { return visited_.contains(key); }

private:
    struct Entry {
        double f_total;
        double complexity;
        std::uint64_t order;
        std::size_t slot;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.f_total != b.f_total) return a.f_total > b.f_total;
            if (a.complexity != b.complexity) return a.complexity > b.complexity;
            return a.order > b.order;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    std::vector<std::optional<Candidate>> store_;
    std::vector<std::size_t> free_;
    std::set<std::string> visited_;
    std::uint64_t next_order_ = 0;
};

/// Leaf ordinals sorted by descending gradient norm, ties leftmost first.
std::vector<int> rank_leaves(const Candidate& c);

/// The argmax-gradient leaf.
int select_expansion_leaf(const Candidate& c);

struct Expansion {
    Program program;
    ParamValues params;
    std::string key;
    std::string parent_key;
    int leaf = -1;
    std::uint64_t seed = 0;
};

/// All depth-1 replacements of `leaf` (or of the root, for the empty program)
/// by type-compatible instructions, one per parameter/variable pattern of
/// their arguments. Randomness comes from a seed derived per child.
std::vector<Expansion> expand(const Program& program, const ParamValues& params, int leaf, const Registry& registry,
                              const TraceSchema& schema, std::uint64_t run_seed, double init_variance = 0.1);

std::vector<Expansion> expand(const Candidate& c, const Registry& registry, const TraceSchema& schema,
                              std::uint64_t run_seed, double init_variance = 0.1);

bool matches(const Candidate& c, const ObservationTrace& trace, const ErrorSpec& spec);

struct SolutionSet {
    std::optional<Candidate> solution;
    std::vector<Candidate> top;  // ascending f_total
    int iterations = 0;
    std::size_t optimised = 0;
    double wall_seconds = 0.0;
};

SolutionSet induce(const ObservationTrace& trace, const Registry& registry, const ErrorSpec& spec,
                   const SearchConfig& config);

/// Number of distinct program structures (parameters collapsed) of depth at
/// most `max_depth` that the expansion grammar can produce.
std::uint64_t enumerate_programs(const Registry& registry, const TraceSchema& schema, int max_depth);

std::uint64_t derive_seed(std::uint64_t run_seed, const std::string& parent_key, int leaf, const std::string& subtree);

} // namespace progind

#endif
