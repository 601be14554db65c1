#pragma once

#include "arena/types.hpp"

namespace arena {

bool type_sub(const TypingEnv& env, const TypeP& s, const TypeP& t);
bool qtype_sub(const TypingEnv& env, const QType& p, const QType& q);

// Follows type-variable bounds until a non-variable carrier appears.
TypeP expose(const TypingEnv& env, TypeP t);

}  // namespace arena
