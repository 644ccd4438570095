#include "progind/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "progind/error.hpp"

namespace progind {

Candidate score(OptimizedCandidate opt, const ComplexityWeights& w) {
    Candidate c;
    c.complexity = complexity(opt.program, w);
    c.loss = opt.result.loss;
    c.f_total = c.complexity + c.loss;
    c.key = canonical_key(opt.program);
    c.opt = std::move(opt);
    return c;
}

void CandidateQueue::push(Candidate c) {
    std::size_t slot;
    if (!free_.empty()) {
        slot = free_.back();
        free_.pop_back();
        store_[slot] = std::move(c);
    } else {
        slot = store_.size();
        store_.emplace_back(std::move(c));
    }
    const Candidate& ref = *store_[slot];
    heap_.push({ref.f_total, ref.complexity, next_order_++, slot});
}

Candidate CandidateQueue::pop() {
    const Entry top = heap_.top();
    heap_.pop();
    Candidate c = std::move(*store_[top.slot]);
    store_[top.slot].reset();
    free_.push_back(top.slot);
    return c;
}

std::vector<int> rank_leaves(const Candidate& c) {
    const auto& norms = c.opt.gradients.leaf_norms;
    const auto count = leaves(c.program()).size();
    std::vector<int> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<int>(i);
    auto norm = [&](int i) { return static_cast<std::size_t>(i) < norms.size() ? norms[static_cast<std::size_t>(i)] : 0.0; };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return norm(a) > norm(b); });
    return order;
}

int select_expansion_leaf(const Candidate& c) {
    const auto order = rank_leaves(c);
    if (order.empty()) throw Error(Errc::empty_program, "program has no leaves to expand");
    return order.front();
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Node make_call(const FunctionSpec& fn, int dim) {
    Node n;
    n.kind = fn.is_action() ? NodeKind::action : NodeKind::function;
    n.fn = fn.kind;
    n.name = fn.name;
    n.dim = dim;
    return n;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t run_seed, const std::string& parent_key, int leaf, const std::string& subtree) {
    std::uint64_t h = fnv1a(parent_key);
    h = fnv1a("#" + std::to_string(leaf) + "#", h);
    h = fnv1a(subtree, h);
    return splitmix64(h ^ splitmix64(run_seed));
}

std::vector<Expansion> expand(const Program& program, const ParamValues& params, int leaf, const Registry& registry,
                              const TraceSchema& schema, std::uint64_t run_seed, double init_variance) {
    std::vector<Expansion> out;
    const std::string parent_key = canonical_key(program);
    const double stddev = std::sqrt(init_variance);

    // (instruction, output dimension) pairs that may replace the target.
    std::vector<std::pair<const FunctionSpec*, std::vector<int>>> choices;
    std::vector<LeafRef> refs;
    int target_dim = 0;
    if (program.empty()) {
        for (const FunctionSpec* a : registry.actions()) choices.emplace_back(a, a->arg_dims);
    } else {
        refs = leaves(program);
        if (leaf < 0 || leaf >= static_cast<int>(refs.size()))
            throw Error(Errc::out_of_range, "leaf " + std::to_string(leaf) + " out of range");
        target_dim = refs[static_cast<std::size_t>(leaf)].dim;
        for (const FunctionSpec* f : registry.functions())
            if (auto dims = f->instantiate(target_dim)) choices.emplace_back(f, *dims);
    }

    const int first_id = max_param_id(program) + 1;
    for (const auto& [fn, dims] : choices) {
        const std::size_t n_args = dims.size();
        for (std::uint32_t mask = 0; mask < (1u << n_args); ++mask) {
            bool feasible = true;
            for (std::size_t i = 0; i < n_args && feasible; ++i)
                if ((mask >> i) & 1u) feasible = !schema.variables_of_dimension(dims[i]).empty();
            if (!feasible) continue;

            const std::string subtree = fn->name + "/" + std::to_string(mask);
            Expansion e;
            e.parent_key = parent_key;
            e.leaf = program.empty() ? -1 : leaf;
            e.seed = derive_seed(run_seed, parent_key, e.leaf, subtree);
            std::mt19937_64 rng(e.seed);

            Node call = make_call(*fn, fn->is_action() ? dims.front() : target_dim);
            e.params = params;
            if (!program.empty() && refs[static_cast<std::size_t>(leaf)].kind == NodeKind::param)
                e.params.erase(refs[static_cast<std::size_t>(leaf)].param_id);
            int next_id = first_id;
            for (std::size_t i = 0; i < n_args; ++i) {
                Node arg;
                arg.dim = dims[i];
                if ((mask >> i) & 1u) {
                    const auto names = schema.variables_of_dimension(dims[i]);
                    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
                    arg.kind = NodeKind::var;
                    arg.name = names[pick(rng)];
                } else {
                    std::normal_distribution<double> normal(0.0, stddev);
                    arg.kind = NodeKind::param;
                    arg.param_id = next_id++;
                    Vec v(static_cast<std::size_t>(dims[i]));
                    for (double& x : v) x = normal(rng);
                    e.params[arg.param_id] = std::move(v);
                }
                call.children.push_back(std::move(arg));
            }
            e.program = program.empty() ? Program(std::move(call)) : replace_leaf(program, leaf, std::move(call));
            e.key = canonical_key(e.program);
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<Expansion> expand(const Candidate& c, const Registry& registry, const TraceSchema& schema,
                              std::uint64_t run_seed, double init_variance) {
    if (c.program().empty()) return expand(c.program(), c.opt.params, -1, registry, schema, run_seed, init_variance);
    const auto order = rank_leaves(c);
    const auto rank = static_cast<std::size_t>(std::clamp(c.leaf_rank, 0, static_cast<int>(order.size()) - 1));
    return expand(c.program(), c.opt.params, order[rank], registry, schema, run_seed, init_variance);
}

bool matches(const Candidate& c, const ObservationTrace& trace, const ErrorSpec& spec) {
    return c.opt.result.observed_length == trace.length() && matches(c.opt.result, spec);
}

namespace {

bool ranks_before(const Candidate& a, const Candidate& b) {
    if (a.f_total != b.f_total) return a.f_total < b.f_total;
    if (a.complexity != b.complexity) return a.complexity < b.complexity;
    return a.key < b.key;
}

void offer_top(std::vector<Candidate>& top, const Candidate& c, int k) {
    if (k <= 0) return;
    for (const auto& t : top)
        if (t.key == c.key) return;
    if (static_cast<int>(top.size()) >= k && !ranks_before(c, top.back())) return;
    auto pos = std::lower_bound(top.begin(), top.end(), c, ranks_before);
    top.insert(pos, c);
    if (static_cast<int>(top.size()) > k) top.pop_back();
}

void validate(const SearchConfig& cfg, const ErrorSpec& spec) {
    auto bad = [](const std::string& what) { throw Error(Errc::invalid_config, what); };
    if (!(spec.e_max > 0.0)) bad("e_max must be positive");
    if (!(cfg.optimizer.learning_rate > 0.0)) bad("learning rate must be positive");
    if (!(cfg.optimizer.epsilon > 0.0)) bad("epsilon must be positive");
    if (cfg.optimizer.max_iters < 1) bad("max_opt_iters must be at least 1");
    if (!(cfg.optimizer.tol >= 0.0)) bad("tol must be nonnegative");
    if (cfg.max_iterations < 1) bad("max_iterations must be at least 1");
    if (cfg.top_k < 1) bad("top_k must be at least 1");
    if (cfg.workers < 1) bad("workers must be at least 1");
    if (!(cfg.init_variance > 0.0)) bad("init_variance must be positive");
    if (cfg.weights.depth < 0 || cfg.weights.params < 0 || cfg.weights.vars < 0) bad("complexity weights must be nonnegative");
}

} // namespace

SolutionSet induce(const ObservationTrace& trace, const Registry& registry, const ErrorSpec& spec,
                   const SearchConfig& config) {
    validate(config, spec);
    if (registry.actions().empty()) throw Error(Errc::invalid_config, "registry has no actions");
    const auto started = std::chrono::steady_clock::now();
    const VariableIndex index(trace);
    const TraceSchema& schema = trace.schema();

    SolutionSet out;
    CandidateQueue queue;
    std::set<std::string> pushed;

    // Optimises fresh expansions and pushes them in key order, so the queue
    // contents never depend on which worker finished first.
    auto optimise_and_push = [&](std::vector<Expansion> children) {
        std::sort(children.begin(), children.end(),
                  [](const Expansion& a, const Expansion& b) { return a.key < b.key; });
        std::vector<Expansion> fresh;
        for (auto& e : children)
            if (queue.visit(e.key)) fresh.push_back(std::move(e));
        std::vector<Proposal> proposals;
        proposals.reserve(fresh.size());
        for (const auto& e : fresh) proposals.push_back({e.program, e.params});
        auto results = config.workers > 1
                           ? optimize_batch_parallel(proposals, trace, index, spec, config.optimizer, config.workers)
                           : optimize_batch_serial(proposals, trace, index, spec, config.optimizer);
        out.optimised += results.size();
        for (std::size_t i = 0; i < results.size(); ++i) {
            Candidate c = score(std::move(results[i]), config.weights);
            c.parent_key = fresh[i].parent_key;
            c.expansion_leaf = fresh[i].leaf;
            c.seed = fresh[i].seed;
            // Variable reassignment can land on a structure already queued.
            if (!pushed.insert(c.key).second) continue;
            queue.visit(c.key);
            offer_top(out.top, c, config.top_k);
            queue.push(std::move(c));
        }
    };

    queue.visit(canonical_key(Program{}));
    optimise_and_push(expand(Program{}, {}, -1, registry, schema, config.seed, config.init_variance));

    while (!queue.empty() && out.iterations < config.max_iterations) {
        Candidate c = queue.pop();
        ++out.iterations;
        if (matches(c, trace, spec)) {
            out.solution = std::move(c);
            break;
        }
        const int n_leaves = static_cast<int>(leaves(c.program()).size());
        if (n_leaves == 0) continue;
        optimise_and_push(expand(c, registry, schema, config.seed, config.init_variance));
        // One retry through the runner-up leaf.
        if (c.leaf_rank == 0 && n_leaves > 1) {
            c.leaf_rank = 1;
            queue.push(std::move(c));
        }
    }

    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

namespace {

std::uint64_t count_subtrees(const Registry& registry, const TraceSchema& schema, int dim, int budget,
                             std::map<std::pair<int, int>, std::uint64_t>& memo) {
    auto it = memo.find({dim, budget});
    if (it != memo.end()) return it->second;
    std::uint64_t n = 1 + schema.variables_of_dimension(dim).size();
    if (budget > 0) {
        for (const FunctionSpec* f : registry.functions()) {
            auto dims = f->instantiate(dim);
            if (!dims) continue;
            std::uint64_t prod = 1;
            for (int d : *dims) prod *= count_subtrees(registry, schema, d, budget - 1, memo);
            n += prod;
        }
    }
    memo[{dim, budget}] = n;
    return n;
}

} // namespace

std::uint64_t enumerate_programs(const Registry& registry, const TraceSchema& schema, int max_depth) {
    if (max_depth < 1) return 0;
    std::map<std::pair<int, int>, std::uint64_t> memo;
    std::uint64_t total = 0;
    for (const FunctionSpec* a : registry.actions()) {
        std::uint64_t prod = 1;
        for (int d : a->arg_dims) prod *= count_subtrees(registry, schema, d, max_depth - 1, memo);
        total += prod;
    }
    return total;
}

} // namespace progind
