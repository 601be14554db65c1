#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "arena/cli.hpp"
#include "arena/meta.hpp"
#include "arena/reach.hpp"
#include "arena/subtyping.hpp"
#include "arena/surface.hpp"

namespace arena::test {

inline Qualifier Q(std::string_view s) { return parse_qualifier(s); }

inline QType T(std::string_view s) { return parse_qtype(s); }

inline TypeP ref_int() { return ref_type(qt(int_type())); }

// [r: Ref[Int]^◇, s: Ref[Int]^{r}]
inline TypingEnv alias_env() {
    return TypingEnv{}.with_term("r", qt(ref_int(), Qualifier::diamond())).with_term("s", qt(ref_int(), Q("{r}")));
}

// [u: Ref[Int]^◇, v: Ref[Int]^◇]
inline TypingEnv uv_env() {
    return TypingEnv{}.with_term("u", qt(ref_int(), Qualifier::diamond())).with_term("v", qt(ref_int(), Qualifier::diamond()));
}

inline std::filesystem::path corpus_dir() { return ARENA_CORPUS_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ParseOptions corpus_options(const std::filesystem::path& arn) {
    ParseOptions o;
    o.ext_int = cli::parse_expect(slurp(std::filesystem::path(arn).replace_extension(".expect"))).ext_int;
    return o;
}

inline TermP corpus_program(const std::string& name) {
    auto p = corpus_dir() / (name + ".arn");
    return compile(slurp(p), corpus_options(p));
}

}  // namespace arena::test
