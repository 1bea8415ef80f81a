#include "llw/fixtures.hpp"

namespace llw {

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

ProofPtr ax(const char *a) { return build::ax(F(a)); }

ProofPtr distributivity() {
    // |- a^ @ (b^ & c^), (a*b) + (a*c)
    ProofPtr left = build::plus_l(build::tensor(ax("a"), F("a"), ax("b"), F("b")), F("a*b"), F("a*c"));
    ProofPtr right = build::plus_r(build::tensor(ax("a"), F("a"), ax("c"), F("c")), F("a*b"), F("a*c"));
    ProofPtr w = build::with(left, F("b^"), right, F("c^"));
    return build::par(w, F("a^"), F("b^ & c^"));
}

ProofPtr distributivity_converse() {
    // |- (a^ @ b^) & (a^ @ c^), a * (b + c)
    ProofPtr left = build::tensor(ax("a"), F("a"), build::plus_l(ax("b"), F("b"), F("c")), F("b+c"));
    ProofPtr right = build::tensor(ax("a"), F("a"), build::plus_r(ax("c"), F("b"), F("c")), F("b+c"));
    return build::with(build::par(left, F("a^"), F("b^")), F("a^ @ b^"), build::par(right, F("a^"), F("c^")),
                       F("a^ @ c^"));
}

ProofPtr par_inversion() {
    // From |- a^*b^, a@b recover |- a^*b^, a, b by a cut against |- a^*b^, a, b.
    ProofPtr hyp = build::par(build::tensor(ax("a^"), F("a^"), ax("b^"), F("b^")), F("a"), F("b"));
    ProofPtr inverse = build::tensor(ax("a^"), F("a^"), ax("b^"), F("b^"));
    return build::cut(hyp, F("a @ b"), inverse);
}

ProofPtr with_inversion() {
    // From |- a&b, a^+b^ recover |- a, a^+b^.
    ProofPtr hyp = build::with(build::plus_l(ax("a"), F("a^"), F("b^")), F("a"),
                               build::plus_r(ax("b"), F("a^"), F("b^")), F("b"));
    ProofPtr select = build::plus_l(ax("a"), F("a^"), F("b^"));
    return build::cut(hyp, F("a & b"), select);
}

ProofPtr digging() {
    // |- ??a, !a^  cut against  |- !!a^, ?a  gives |- ?a, !a^.
    ProofPtr hyp = build::promotion(build::dereliction(build::dereliction(ax("a"), F("a")), F("?a")), F("a^"));
    ProofPtr dig = build::promotion(ax("?a"), F("!a^"));
    return build::cut(hyp, F("??a"), dig);
}

ProofPtr bang_with() {
    // |- ?a^ @ ?b^, !(a & b)
    ProofPtr l = build::weakening(build::dereliction(ax("a"), F("a^")), F("?b^"));
    ProofPtr r = build::weakening(build::dereliction(ax("b"), F("b^")), F("?a^"));
    ProofPtr w = build::with(l, F("a"), r, F("b"));
    return build::par(build::promotion(w, F("a & b")), F("?a^"), F("?b^"));
}

ProofPtr bang_with_converse() {
    // |- ?(a^ + b^), !a * !b
    ProofPtr l = build::promotion(build::dereliction(build::plus_l(ax("a"), F("a^"), F("b^")), F("a^ + b^")), F("a"));
    ProofPtr r = build::promotion(build::dereliction(build::plus_r(ax("b"), F("a^"), F("b^")), F("a^ + b^")), F("b"));
    return build::contraction(build::tensor(l, F("!a"), r, F("!b")), F("?(a^ + b^)"));
}

ProofPtr functorial_promotion() {
    // |- a^, a  derived into  |- ?a^, !a
    return build::promotion(build::dereliction(ax("a"), F("a^")), F("a"));
}

ProofPtr menu() {
    // The price 17E is read as the tensor of what each part of the budget buys:
    // 17E = (q&s) * (c&f) * (b&t).
    ProofPtr entree = build::with(build::plus_l(ax("q"), F("q^"), F("s^")), F("q"),
                                  build::plus_r(ax("s"), F("q^"), F("s^")), F("s"));
    ProofPtr dish = build::with(build::plus_l(ax("c"), F("c^"), F("f^")), F("c"),
                                build::plus_r(ax("f"), F("c^"), F("f^")), F("f"));
    ProofPtr dessert = build::with(build::plus_l(ax("b"), F("b^"), F("t^")), F("b"),
                                   build::plus_r(build::plus_r(ax("t"), F("p"), F("t")), F("b^"), F("t^")),
                                   F("p + t"));
    ProofPtr two = build::tensor(entree, F("q & s"), dish, F("c & f"));
    ProofPtr three = build::tensor(two, F("(q & s) * (c & f)"), dessert, F("b & (p + t)"));
    ProofPtr inner = build::par(three, F("q^ + s^"), F("c^ + f^"));
    return build::par(inner, F("(q^ + s^) @ (c^ + f^)"), F("b^ + t^"));
}

} // namespace

std::vector<Fixture> standard_fixtures() {
    return {
        {"distributivity", "tensor distributes over plus", distributivity()},
        {"distributivity_converse", "the converse distributivity sequent", distributivity_converse()},
        {"par_inversion", "par premise recovered through a cut", par_inversion()},
        {"with_inversion", "with premise recovered through a cut", with_inversion()},
        {"digging", "??a collapsed to ?a through a cut", digging()},
        {"bang_with", "|- ?a^ @ ?b^, !(a & b)", bang_with()},
        {"bang_with_converse", "|- ?(a^ + b^), !a * !b", bang_with_converse()},
        {"functorial_promotion", "promotion of a context without ? via dereliction", functorial_promotion()},
        {"menu", "three-course menu bought with a split budget", menu()},
    };
}

std::vector<std::string> core_fixture_names() {
    return {"distributivity", "par_inversion", "with_inversion", "digging", "bang_with"};
}

const Fixture &find_fixture(const std::vector<Fixture> &all, const std::string &name) {
    for (const auto &f : all) {
        if (f.name == name) {
            return f;
        }
    }
    fail(ErrorKind::Invalid, "no fixture named '" + name + "'");
}

} // namespace llw
