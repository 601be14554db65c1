#pragma once

#include "arena/qualifier.hpp"
#include "arena/types.hpp"

namespace arena {

// q*: close q under the declared qualifiers of its variables.
// Throws std::logic_error on a variable unbound in env.
Qualifier saturate(const TypingEnv& env, const Qualifier& q);

// p ⊼ q = ◇(p* ∩ q*)
Qualifier overlap(const TypingEnv& env, const Qualifier& p, const Qualifier& q);

// Decides p <: q under env.
bool qual_sub(const TypingEnv& env, const Qualifier& p, const Qualifier& q);

}  // namespace arena
