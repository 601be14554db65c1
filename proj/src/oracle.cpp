#include "arena/meta.hpp"
#include "arena/reach.hpp"

namespace arena {

Qualifier QualUniverse::decode(std::uint32_t mask) const {
    Qualifier q;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (mask & (1u << i)) q.vars.insert(names[i]);
    q.fresh = (mask >> names.size()) & 1u;
    return q;
}

QualUniverse universe_of(const TypingEnv& env) {
    QualUniverse u;
    for (const auto& b : env.entries()) u.names.push_back(b.kind == Binding::Kind::Term ? b.name : b.qvar);
    return u;
}

namespace {

std::uint32_t encode(const QualUniverse& u, const Qualifier& q) {
    std::uint32_t m = q.fresh ? 1u << u.names.size() : 0;
    for (std::size_t i = 0; i < u.names.size(); ++i)
        if (q.vars.count(u.names[i])) m |= 1u << i;
    return m;
}

}  // namespace

QualRelation declarative_qsub_oracle(const TypingEnv& env, std::size_t universe_bound) {
    QualUniverse u = universe_of(env);
    if (u.bits() > universe_bound || u.bits() > 6)
        throw std::invalid_argument("oracle universe too large: " + std::to_string(u.bits()) + " elements");
    const std::size_t n = u.subsets();
    QualRelation rel(n, 0);
    auto add = [&](std::size_t a, std::size_t b) { rel[a] |= std::uint64_t{1} << b; };

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if ((a & ~b) == 0) add(a, b);  // q-sub
    for (std::size_t i = 0; i < env.entries().size(); ++i) {
        const Binding& bd = env.entries()[i];
        const Qualifier& q = bd.type.q;
        if (q.fresh) continue;
        std::uint32_t self = 1u << i;
        add(self, encode(u, q));  // q-var / q-qvar
        if (bd.kind == Binding::Kind::Term) add(encode(u, q) | self, self);  // q-self
    }

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t a = 0; a < n; ++a)  // q-cong
            for (std::size_t b = 0; b < n; ++b) {
                if (!((rel[a] >> b) & 1)) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    std::uint64_t bit = std::uint64_t{1} << (b | c);
                    if (!(rel[a | c] & bit)) {
                        rel[a | c] |= bit;
                        changed = true;
                    }
                }
            }
        for (std::size_t k = 0; k < n; ++k)  // q-trans
            for (std::size_t a = 0; a < n; ++a)
                if (((rel[a] >> k) & 1) && (rel[a] | rel[k]) != rel[a]) {
                    rel[a] |= rel[k];
                    changed = true;
                }
    }
    return rel;
}

std::vector<TypingEnv> enumerate_contexts(std::size_t max_bindings) {
    std::vector<TypingEnv> out{TypingEnv{}};
    std::vector<TypingEnv> frontier{TypingEnv{}};
    for (std::size_t i = 0; i < max_bindings; ++i) {
        std::vector<TypingEnv> grown;
        for (const auto& env : frontier) {
            QualUniverse u = universe_of(env);
            for (std::uint32_t m = 0; m < u.subsets(); ++m) {
                Qualifier q = u.decode(m);
                std::string idx = std::to_string(i);
                grown.push_back(env.with_term("b" + idx, qt(int_type(), q)));
                grown.push_back(env.with_type("B" + idx, "b" + idx, qt(top_type(), q)));
            }
        }
        out.insert(out.end(), grown.begin(), grown.end());
        frontier = std::move(grown);
    }
    return out;
}

namespace {

void sweep_one(const TypingEnv& env, OracleSweep& acc) {
    QualUniverse u = universe_of(env);
    QualRelation rel = declarative_qsub_oracle(env);
    const std::size_t n = u.subsets();
    std::vector<Qualifier> quals;
    quals.reserve(n);
    for (std::uint32_t m = 0; m < n; ++m) quals.push_back(u.decode(m));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            bool want = (rel[a] >> b) & 1;
            bool got = qual_sub(env, quals[a], quals[b]);
            ++acc.pairs;
            if (want != got) {
                ++acc.disagreements;
                if (acc.examples.size() < 10) {
                    std::string ctx;
                    for (const auto& bd : env.entries())
                        ctx += (ctx.empty() ? "" : ", ") +
                               (bd.kind == Binding::Kind::Term ? bd.name + ": " : bd.name + "^" + bd.qvar + " <: ") +
                               to_string(bd.type);
                    acc.examples.push_back("[" + ctx + "] " + to_string(quals[a]) + " <: " + to_string(quals[b]) +
                                           " oracle=" + (want ? "yes" : "no") + " algorithm=" + (got ? "yes" : "no"));
                }
            }
        }
    ++acc.contexts;
}

}  // namespace

OracleSweep sweep_oracle_serial(const std::vector<TypingEnv>& envs) {
    OracleSweep acc;
    for (const auto& env : envs) sweep_one(env, acc);
    return acc;
}

OracleSweep sweep_oracle_parallel(const std::vector<TypingEnv>& envs) {
    OracleSweep total;
    const long n = static_cast<long>(envs.size());
#pragma omp parallel
    {
        OracleSweep local;
#pragma omp for schedule(dynamic, 16) nowait
        for (long i = 0; i < n; ++i) sweep_one(envs[static_cast<std::size_t>(i)], local);
#pragma omp critical
        {
            total.contexts += local.contexts;
            total.pairs += local.pairs;
            total.disagreements += local.disagreements;
            for (auto& e : local.examples)
                if (total.examples.size() < 10) total.examples.push_back(std::move(e));
        }
    }
    return total;
}

}  // namespace arena
