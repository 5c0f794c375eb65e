#include <gtest/gtest.h>

#include <random>

#include "oobleck/visc/visc.hpp"
#include "support/corpus.hpp"
#include "support/modgen.hpp"
#include "support/oracle.hpp"

namespace {

using namespace oobleck::visc;
using oobleck::testing::AstEvaluator;
using oobleck::testing::popcount_loop;

Word run_word(const CycleIR& ir, const ValueMap& in, const std::string& out) {
    return run_until_valid(ir, in, 100).outputs.at(out).as_word();
}

TEST(Oracle, PopcountLoopAgreesWithBuiltin) {
    std::mt19937_64 rng(3);
    EXPECT_EQ(popcount_loop(0), 0u);
    EXPECT_EQ(popcount_loop(~std::uint64_t{0}), 64u);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t x = rng();
        EXPECT_EQ(popcount_loop(x), static_cast<std::uint64_t>(__builtin_popcountll(x)));
    }
}

TEST(Interpreter, ChecksumCountsBits) {
    const CompiledModule m = compile(oobleck::testing::corpus_source("checksum"));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        const Word x = rng() | 1u;
        const RunResult r = run_until_valid(m.ir, {{"input", Value::word(x)}}, 10);
        EXPECT_EQ(r.outputs.at("out").as_word(), popcount_loop(x));
        EXPECT_EQ(r.cycles, 2u);
    }
}

TEST(Interpreter, ChecksumOfZeroNeverBecomesValid) {
    const CompiledModule m = compile(oobleck::testing::corpus_source("checksum"));
    try {
        run_until_valid(m.ir, {{"input", Value::word(0)}}, 50);
        FAIL() << "expected NeverValid";
    } catch (const RuntimeError& e) {
        EXPECT_EQ(e.kind(), RuntimeErrorKind::NeverValid);
    }
}

TEST(Interpreter, ZeroCycleBudgetIsRejected) {
    const CompiledModule m = compile(oobleck::testing::corpus_source("identity"));
    EXPECT_THROW(run_until_valid(m.ir, {{"a", Value::word(1)}}, 0), std::invalid_argument);
}

TEST(Interpreter, WordArithmeticWraps) {
    const CompiledModule m = compile(
        "module [] w (a : int, b : int) -> (s : int, d : int, p : int, n : int) {\n"
        "  s = a + b; d = a - b; p = a * b; n = -a;\n} <true; true>");
    const ValueMap in{{"a", Value::word(~Word{0})}, {"b", Value::word(2)}};
    const RunResult r = run_until_valid(m.ir, in, 1);
    EXPECT_EQ(r.outputs.at("s").as_word(), 1u);
    EXPECT_EQ(r.outputs.at("d").as_word(), ~Word{0} - 2);
    EXPECT_EQ(r.outputs.at("p").as_word(), ~Word{0} - 1);
    EXPECT_EQ(r.outputs.at("n").as_word(), 1u);
}

TEST(Interpreter, WideShiftsYieldZero) {
    const CompiledModule m = compile("module [] s (a : int, b : int) -> (l : int, r : int) { l = a << b; r = a >> b; } <true; true>");
    for (Word b : {Word{63}, Word{64}, Word{65}, Word{1000}, ~Word{0}}) {
        const ValueMap in{{"a", Value::word(~Word{0})}, {"b", Value::word(b)}};
        EXPECT_EQ(run_word(m.ir, in, "l"), b >= 64 ? 0 : ~Word{0} << b) << b;
        EXPECT_EQ(run_word(m.ir, in, "r"), b >= 64 ? 0 : ~Word{0} >> b) << b;
    }
}

TEST(Interpreter, StateReadsSeeThePreviousCycle) {
    const CompiledModule m = compile(
        "module [c : int = 10] k (a : int) -> (o : int) { @c = c + a; @c = c + 2 * a; o = c; } <true; true>");
    StateVector s = initial_state(m.ir);
    const ValueMap in{{"a", Value::word(1)}};
    Word expected = 10;
    for (int i = 0; i < 5; ++i) {
        StepResult r = step(m.ir, s, in);
        EXPECT_EQ(r.outputs.at("o").as_word(), expected);
        expected += 2;  // last write wins
        s = r.next_state;
    }
}

TEST(Interpreter, UnwrittenStateCarriesOver) {
    const CompiledModule m = compile(
        "module [c : int = 3, d : int = 4] k (a : bool) -> (o : int) { @c = a ? c + 1 : c; o = c + d; } <true; true>");
    StepResult r = step(m.ir, initial_state(m.ir), {{"a", Value::flag(true)}});
    EXPECT_EQ(r.next_state[0], Value::word(4));
    EXPECT_EQ(r.next_state[1], Value::word(4));
}

TEST(Interpreter, WindowFillsInFourCycles) {
    const CompiledModule m = compile(oobleck::testing::corpus_source("window"));
    const RunResult r = run_until_valid(m.ir, {{"x", Value::word(5)}}, 10);
    EXPECT_EQ(r.cycles, 4u);
    EXPECT_EQ(r.outputs.at("sum").as_word(), 20u);
    EXPECT_EQ(r.outputs.at("last"), Value::array({5, 5, 5, 5}));
}

TEST(Interpreter, ReadyAndValidAreReported) {
    const CompiledModule m = compile(oobleck::testing::corpus_source("lookup"));
    StepResult r = step(m.ir, initial_state(m.ir), {{"sel", Value::word(0x100)}});
    EXPECT_TRUE(r.valid);
    EXPECT_FALSE(r.ready);
    EXPECT_EQ(r.outputs.at("val").as_word(), 3u);
    r = step(m.ir, initial_state(m.ir), {{"sel", Value::word(3)}});
    EXPECT_TRUE(r.ready);
    EXPECT_EQ(r.outputs.at("val").as_word(), 0xdeadbeefu);
}

TEST(Interpreter, RuntimeErrors) {
    const CompiledModule id = compile(oobleck::testing::corpus_source("identity"));
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const RuntimeError& e) {
            return e.kind();
        }
        ADD_FAILURE() << "no RuntimeError";
        return RuntimeErrorKind::NeverValid;
    };
    EXPECT_EQ(kind_of([&] { step(id.ir, {}, {}); }), RuntimeErrorKind::MissingInput);
    EXPECT_EQ(kind_of([&] { step(id.ir, {}, {{"a", Value::flag(true)}}); }), RuntimeErrorKind::TypeErrorAtRuntime);

    const CompiledModule dyn = compile("module [] d (v : [3], i : int) -> (o : int) { o = v[i]; } <true; true>");
    const ValueMap bad{{"v", Value::array({1, 2, 3})}, {"i", Value::word(3)}};
    EXPECT_EQ(kind_of([&] { step(dyn.ir, {}, bad); }), RuntimeErrorKind::IndexOutOfRange);
    const ValueMap good{{"v", Value::array({1, 2, 3})}, {"i", Value::word(2)}};
    EXPECT_EQ(step(dyn.ir, {}, good).outputs.at("o").as_word(), 3u);
    const ValueMap short_array{{"v", Value::array({1, 2})}, {"i", Value::word(0)}};
    EXPECT_EQ(kind_of([&] { step(dyn.ir, {}, short_array); }), RuntimeErrorKind::TypeErrorAtRuntime);
}

TEST(Interpreter, MatchesTheTreeWalkerOnRandomModules) {
    std::mt19937_64 rng(2024);
    oobleck::testing::GenOptions opt;
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
        const std::string src = oobleck::testing::random_module(rng, opt, "g");
        SCOPED_TRACE(src);
        const CompiledModule m = compile(src);
        for (int v = 0; v < 10; ++v) {
            const ValueMap in = oobleck::testing::random_inputs(m.ir, rng);
            AstEvaluator oracle(m.typed);
            StateVector s = initial_state(m.ir);
            for (int c = 0; c < 4; ++c) {
                const StepResult r = step(m.ir, s, in);
                const AstEvaluator::Cycle e = oracle.step(in);
                ASSERT_EQ(r.outputs, e.outputs);
                ASSERT_EQ(r.valid, e.valid);
                ASSERT_EQ(r.ready, e.ready);
                s = r.next_state;
                ++compared;
            }
        }
    }
    EXPECT_EQ(compared, 400 * 10 * 4);
}

TEST(Interpreter, ValueTextRoundTrips) {
    EXPECT_EQ(to_string(Value::array({1, 2, 3})), "[1:2:3]");
    EXPECT_EQ(parse_value("[1:0x2:3]", VType::array(3)), Value::array({1, 2, 3}));
    EXPECT_EQ(parse_value("0xff", VType::integer()), Value::word(255));
    EXPECT_EQ(parse_value("true", VType::boolean()), Value::flag(true));
    EXPECT_EQ(parse_value("0", VType::boolean()), Value::flag(false));
    EXPECT_THROW(parse_value("[1:2]", VType::array(3)), std::invalid_argument);
    EXPECT_THROW(parse_value("12z", VType::integer()), std::invalid_argument);
    EXPECT_THROW(parse_value("maybe", VType::boolean()), std::invalid_argument);
}

}  // namespace
