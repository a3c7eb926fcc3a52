#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "voa/engine.hpp"
#include "voa/liealg.hpp"

#include <functional>
#include <string>
#include <vector>

using namespace voa;

namespace {

std::string thrown_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    return "";
}

// Coefficient vector over an n-dimensional basis with a few named entries.
std::vector<Scalar> cvec(int n, std::initializer_list<std::pair<int, Scalar>> entries) {
    auto v = std::vector<Scalar>(size_t(n));
    for (const auto& [i, c] : entries) v[size_t(i)] = c;
    return v;
}

Scalar half() { return Scalar(BigInt(1), BigInt(2)); }

const char* u1_text = "(liealg u1 (basis (J even)) (form J J 1) (dual-coxeter 0))";

} // namespace

TEST_CASE("builtin structure tables validate and expose the documented data") {
    LieSuperData s = lie_sl2();
    REQUIRE(s.dim() == 3);
    int e = s.find("e"), h = s.find("h"), f = s.find("f");
    REQUIRE(e == 0);
    REQUIRE(h == 1);
    REQUIRE(f == 2);
    CHECK(!s.parity[0]);
    CHECK(s.bracket(h, e) == cvec(3, {{e, Scalar(2)}}));
    CHECK(s.bracket(e, h) == cvec(3, {{e, Scalar(-2)}})); // filled by antisymmetry
    CHECK(s.bracket(e, f) == cvec(3, {{h, Scalar(1)}}));
    CHECK(s.bracket(e, e) == cvec(3, {}));
    CHECK(s.form0[size_t(e)][size_t(f)] == Scalar(1));
    CHECK(s.form0[size_t(f)][size_t(e)] == Scalar(1));
    CHECK(s.form0[size_t(h)][size_t(h)] == Scalar(2));
    CHECK(s.form0[size_t(e)][size_t(e)] == Scalar(0));
    CHECK(s.e == e);
    CHECK(s.h == h);
    CHECK(s.f == f);
    CHECK(s.has_dual_coxeter);
    CHECK(s.dual_coxeter == Scalar(2));

    LieSuperData g = lie_gl11();
    REQUIRE(g.dim() == 4);
    int N = g.find("N"), E = g.find("E"), p = g.find("psi+"), m = g.find("psi-");
    CHECK(!g.parity[size_t(N)]);
    CHECK(g.parity[size_t(p)]);
    CHECK(g.bracket(p, m) == cvec(4, {{E, Scalar(1)}}));
    // an odd-odd bracket is symmetric, so the filled direction keeps the sign
    CHECK(g.bracket(m, p) == cvec(4, {{E, Scalar(1)}}));
    CHECK(g.bracket(N, p) == cvec(4, {{p, Scalar(1)}}));
    CHECK(g.bracket(E, p) == cvec(4, {}));
    CHECK(g.form0[size_t(p)][size_t(m)] == Scalar(1));
    CHECK(g.form0[size_t(m)][size_t(p)] == Scalar(-1)); // odd block is antisymmetric
    CHECK(g.form0[size_t(N)][size_t(E)] == Scalar(1));
    CHECK(g.dual_coxeter == Scalar(0));

    LieSuperData t = lie_sl21();
    REQUIRE(t.dim() == 8);
    int E2 = t.find("E"), H2 = t.find("H"), Z = t.find("Z");
    int xp = t.find("x+"), xm = t.find("x-"), yp = t.find("y+"), ym = t.find("y-");
    CHECK(t.bracket(xp, xm) == cvec(8, {{H2, half()}, {Z, half()}}));
    CHECK(t.bracket(xm, xp) == cvec(8, {{H2, half()}, {Z, half()}}));
    CHECK(t.bracket(yp, ym) == cvec(8, {{H2, -half()}, {Z, half()}}));
    CHECK(t.bracket(E2, xm) == cvec(8, {{ym, Scalar(-1)}}));
    CHECK(t.bracket(xm, E2) == cvec(8, {{ym, Scalar(1)}}));
    CHECK(t.bracket(xp, ym) == cvec(8, {{E2, Scalar(1)}}));
    CHECK(t.form0[size_t(Z)][size_t(Z)] == Scalar(-2));
    CHECK(t.form0[size_t(xp)][size_t(xm)] == Scalar(1));
    CHECK(t.form0[size_t(xm)][size_t(xp)] == Scalar(-1));
    CHECK(t.dual_coxeter == Scalar(1));
}

TEST_CASE("structure text parses order-independently and cross-checks") {
    // same data as the bundled sl2, clauses shuffled, both bracket directions
    LieSuperData a = lie_from_text(R"((liealg sl2
      (dual-coxeter 2)
      (form h h 2)
      (bracket e f 1 h)
      (triple e h f)
      (basis (e even) (h even) (f even))
      (bracket e h -2 e)
      (bracket h e 2 e)
      (bracket h f -2 f)
      (form e f 1)))");
    LieSuperData b = lie_sl2();
    CHECK(a.br == b.br);
    CHECK(a.form0 == b.form0);
    CHECK(a.e == b.e);
    CHECK(a.dual_coxeter == b.dual_coxeter);

    // a clause may split a bracket across several coefficient pairs
    LieSuperData c = lie_from_text(R"((liealg u2
      (basis (J even) (K even))
      (form J J 1)
      (form K K 1)))");
    CHECK(c.bracket(0, 1) == cvec(2, {}));

    // symbolic coefficients pass through the scalar grammar
    LieSuperData d = lie_from_text(
        "(liealg uq (basis (J even)) (form J J {q}) (dual-coxeter 0))");
    CHECK(d.form0[0][0] == Scalar::param("q"));
}

TEST_CASE("structure validation rejects broken data") {
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (e even) (h even) (f even))"
                            "(bracket h e 2 e)(bracket e h 2 e)"
                            "(bracket h f -2 f)(bracket e f 1 h)"
                            "(form e f 1)(form h h 2))");
          }) == "liealg-antisymmetry");
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (a even) (b odd))"
                            "(bracket a b 1 a)(form a a 1)(form b b 1))");
          }) == "liealg-parity");
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (x even) (y even) (z even))"
                            "(bracket x y 1 z)(bracket y z 1 x)(bracket z x 1 x)"
                            "(form x x 1)(form y y 1)(form z z 1))");
          }) == "liealg-jacobi");
    CHECK(thrown_code([] { lie_from_text("(liealg w (basis (a even)))"); }) ==
          "liealg-degenerate-form");
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (a even)) (form a a 1) (bracket a q 1 a))");
          }) == "liealg-parse");
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (a even) (a even)) (form a a 1))");
          }) == "liealg-parse");
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (a middling)) (form a a 1))");
          }) == "liealg-parse");
    CHECK(thrown_code([] { lie_from_text("(liealg w (form a a 1))"); }) == "liealg-parse");
    CHECK(thrown_code([] { lie_from_text("(nonsense)"); }) == "liealg-parse");
    // invariance: <[h,e],f> = 2 but <h,[e,f]> = <h,h> with a broken form value
    CHECK(thrown_code([] {
              lie_from_text("(liealg w (basis (e even) (h even) (f even))"
                            "(bracket h e 2 e)(bracket h f -2 f)(bracket e f 1 h)"
                            "(form e f 1)(form h h 3))");
          }) == "liealg-form-invariance");
}

TEST_CASE("bundled data files match the builtin tables") {
    std::string dir = std::string(VOA_SOURCE_DIR) + "/data/";
    LieSuperData s = lie_from_file(dir + "sl2.lie");
    CHECK(s.br == lie_sl2().br);
    CHECK(s.form0 == lie_sl2().form0);
    LieSuperData g = lie_from_file(dir + "gl11.lie");
    CHECK(g.br == lie_gl11().br);
    LieSuperData t = lie_from_file(dir + "sl21.lie");
    CHECK(t.br == lie_sl21().br);
    CHECK(t.form0 == lie_sl21().form0);
    CHECK(thrown_code([&] { lie_from_file(dir + "no-such-file.lie"); }) == "liealg-io");
}

TEST_CASE("affine currents carry the bracket pole and the level pole") {
    Scalar k = Scalar::param("k");
    LieSuperData g = lie_sl2();
    AlgebraDef A = affine(g, k);
    REQUIRE(A.gens.size() == 3);
    CHECK(A.find("e") == 0);
    CHECK(A.find("h") == 1);
    CHECK(A.find("f") == 2);
    CHECK(!A.g(0).odd);
    REQUIRE(A.g(0).weight.has_value());
    CHECK(*A.g(0).weight == Scalar(1));

    State e = State::gen(0), h = State::gen(1), f = State::gen(2);
    SingularOPE ef;
    ef.p[0] = h;
    ef.p[1] = State::vacuum(k);
    CHECK(singular_ope(e, f, A) == ef);
    SingularOPE fe;
    fe.p[0] = -h;
    fe.p[1] = State::vacuum(k);
    CHECK(singular_ope(f, e, A) == fe);
    SingularOPE hh;
    hh.p[1] = State::vacuum(Scalar(2) * k);
    CHECK(singular_ope(h, h, A) == hh);
    SingularOPE he;
    he.p[0] = e * Scalar(2);
    CHECK(singular_ope(h, e, A) == he);
    CHECK(singular_ope(e, e, A).empty());

    AlgebraDef U = affine(lie_from_text(u1_text), Scalar(1));
    State J = State::gen(0);
    SingularOPE jj;
    jj.p[1] = State::vacuum();
    CHECK(singular_ope(J, J, U) == jj);
}

TEST_CASE("supersymmetric current algebra wires pairings, currents, partners") {
    Scalar k = Scalar::param("k");
    LieSuperData g = lie_sl2();
    AlgebraDef A = vg_super(g, k);
    REQUIRE(A.gens.size() == 6);
    CHECK(A.find("ebar") == 0);
    CHECK(A.find("hbar") == 1);
    CHECK(A.find("fbar") == 2);
    CHECK(A.find("e") == 3);
    CHECK(A.g(0).odd);   // fermion partner of an even basis vector
    CHECK(!A.g(3).odd);
    REQUIRE(A.g(0).weight.has_value());
    CHECK(*A.g(0).weight == half());
    CHECK(*A.g(3).weight == Scalar(1));

    State ebar = State::gen(0), hbar = State::gen(1), fbar = State::gen(2);
    State e = State::gen(3), h = State::gen(4), f = State::gen(5);

    // pairing poles carry the shifted level k + hv (hv = 2 for sl2)
    Scalar kk = k + Scalar(2);
    SingularOPE pair_ef;
    pair_ef.p[0] = State::vacuum(kk);
    CHECK(singular_ope(ebar, fbar, A) == pair_ef);
    SingularOPE pair_hh;
    pair_hh.p[0] = State::vacuum(Scalar(2) * kk);
    CHECK(singular_ope(hbar, hbar, A) == pair_hh);
    CHECK(singular_ope(ebar, ebar, A).empty());

    SingularOPE cur;
    cur.p[0] = hbar;
    CHECK(singular_ope(e, fbar, A) == cur); // [e,f]bar
    SingularOPE curs;
    curs.p[0] = ebar * Scalar(2);
    CHECK(singular_ope(h, ebar, A) == curs);
    CHECK(singular_ope(e, ebar, A).empty());
    CHECK(singular_ope(ebar, f, A).get(0) == hbar); // skew-filled direction

    SingularOPE ef;
    ef.p[0] = h;
    ef.p[1] = State::vacuum(kk);
    CHECK(singular_ope(e, f, A) == ef);

    CHECK(susy_D(ebar, A) == e);
    CHECK(susy_D(e, A) == State::gen(0, 1));
    CHECK(susy_D(susy_D(e, A), A) == translate(e, A));

    // at the critical level the pairing poles collapse but the algebra builds
    AlgebraDef Ac = vg_super(g, Scalar(-2));
    CHECK(singular_ope(State::gen(0), State::gen(2), Ac).empty());
    CHECK(singular_ope(State::gen(3), State::gen(5), Ac).get(0) == State::gen(4));
    CHECK(susy_D(State::gen(0), Ac) == State::gen(3));

    CHECK(thrown_code([] {
              vg_super(lie_from_text("(liealg nc (basis (a even) (abar even))"
                                     "(form a abar 1) (dual-coxeter 0))"),
                       Scalar(1));
          }) == "vgsuper-name-clash");
    CHECK(thrown_code([] {
              vg_super(lie_from_text("(liealg nodc (basis (a even)) (form a a 1))"),
                       Scalar(1));
          }) == "vgsuper-no-dual-coxeter");
}

TEST_CASE("odd basis directions flip the pairing and current-action signs") {
    // gl(1|1) at level k (hv = 0): psi+- are odd, N and E are even.
    Scalar k = Scalar::param("k");
    LieSuperData g = lie_gl11();
    AlgebraDef A = vg_super(g, k);
    int N = g.find("N"), E = g.find("E"), p = g.find("psi+"), m = g.find("psi-");
    int n = g.dim();
    State Nbar = State::gen(N), Ebar = State::gen(E);
    State pbar = State::gen(p), mbar = State::gen(m);

    // even-even pairing keeps the plain sign ...
    SingularOPE ne;
    ne.p[0] = State::vacuum(k);
    CHECK(singular_ope(Nbar, Ebar, A) == ne);
    // ... the odd-odd pairing is flipped ...
    SingularOPE pm;
    pm.p[0] = State::vacuum(-k);
    CHECK(singular_ope(pbar, mbar, A) == pm);
    SingularOPE mp;
    mp.p[0] = State::vacuum(k); // (-1)<psi-,psi+>_0 = (-1)(-1)
    CHECK(singular_ope(mbar, pbar, A) == mp);
    // ... an odd current acts with a minus sign ...
    SingularOPE act;
    act.p[0] = -Ebar;
    CHECK(singular_ope(State::gen(n + p), mbar, A) == act);
    // ... and the current-current level pole is unsigned in every sector.
    SingularOPE cur;
    cur.p[0] = State::gen(n + E);
    cur.p[1] = State::vacuum(k);
    CHECK(singular_ope(State::gen(n + p), State::gen(n + m), A) == cur);

    // susy_D is an odd derivation of every generator product: the property
    // that, together with the Borcherds identity, forces the signs above.
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j)
            for (int pole = 0; pole <= 2; ++pole) {
                State x = State::gen(i), y = State::gen(j);
                State lhs = susy_D(nth_product(x, y, pole, A), A);
                State rhs = nth_product(susy_D(x, A), y, pole, A);
                State xDy = nth_product(x, susy_D(y, A), pole, A);
                if (A.g(i).odd) xDy = -xDy;
                CHECK(lhs == rhs + xDy);
            }
}

TEST_CASE("superconformal vector solves on an abelian line") {
    LieSuperData u1 = lie_from_text(u1_text);
    Scalar k = Scalar::param("k");
    AlgebraDef A = vg_super(u1, k);
    State Jbar = State::gen(0), J = State::gen(1);

    State G = kac_todorov(u1, k);
    CHECK(G == norm_product(J, Jbar, A) * k.inverse());

    State L = susy_D(G, A) * half();
    CHECK(is_virasoro(L, A));
    CHECK(central_charge(L, A) == Scalar(BigInt(3), BigInt(2)));
    CHECK(is_primary(G, L, Scalar(BigInt(3), BigInt(2)), A));
    CHECK(is_primary_n1(Jbar, L, G, half(), A));
    CHECK(is_primary(J, L, Scalar(1), A));
}

TEST_CASE("superconformal vector solves on sl2 with the expected charge") {
    LieSuperData g = lie_sl2();
    AlgebraDef A1 = vg_super(g, Scalar(1));
    State G1 = kac_todorov(g, Scalar(1));
    State L1 = susy_D(G1, A1) * half();
    CHECK(is_virasoro(L1, A1));
    CHECK(central_charge(L1, A1) == Scalar(BigInt(5), BigInt(2))); // 3k/(k+2)+3/2 at k=1

    Scalar k = Scalar::param("k");
    AlgebraDef Ak = vg_super(g, k);
    State Gk = kac_todorov(g, k);
    State Lk = susy_D(Gk, Ak) * half();
    Scalar expect = Scalar(3) * k / (k + Scalar(2)) + Scalar(BigInt(3), BigInt(2));
    CHECK(central_charge(Lk, Ak) == expect);
    // every half-weight fermion is a superconformal primary
    for (int i = 0; i < 3; ++i)
        CHECK(is_primary_n1(State::gen(i), Lk, Gk, half(), Ak));

    CHECK(thrown_code([&] { kac_todorov(g, Scalar(-2)); }) == "kac-todorov-critical");
    CHECK(thrown_code([&] { kac_todorov(lie_gl11(), Scalar()); }) == "kac-todorov-critical");
}

TEST_CASE("superconformal vector solves on the basic superalgebras") {
    // gl(1|1): superdimension zero, so the charge vanishes at every level
    LieSuperData g = lie_gl11();
    AlgebraDef A = vg_super(g, Scalar(1));
    State G = kac_todorov(g, Scalar(1));
    State L = susy_D(G, A) * half();
    CHECK(is_virasoro(L, A));
    CHECK(central_charge(L, A) == Scalar(0));

    LieSuperData t = lie_sl21();
    AlgebraDef At = vg_super(t, Scalar(1));
    State Gt = kac_todorov(t, Scalar(1));
    State Lt = susy_D(Gt, At) * half();
    CHECK(is_virasoro(Lt, At));
    CHECK(central_charge(Lt, At) == Scalar(0));
}

TEST_CASE("sl2-triple gradings split the basis") {
    LieSuperData s = lie_sl2();
    Grading gr = sl2_grading(s, s.f);
    REQUIRE(gr.blocks.size() == 3);
    CHECK(gr.blocks.at(Rational(1)) == std::vector<int>{0});
    CHECK(gr.blocks.at(Rational(0)) == std::vector<int>{1});
    CHECK(gr.blocks.at(Rational(-1)) == std::vector<int>{2});
    CHECK(gr.n_plus == std::vector<int>{0});
    CHECK(gr.n_minus == std::vector<int>{2});
    CHECK(gr.g_half.empty());

    LieSuperData t = lie_sl21();
    Grading gt = sl2_grading(t, t.f);
    REQUIRE(gt.blocks.size() == 5);
    CHECK(gt.blocks.at(Rational(1)) == std::vector<int>{t.find("E")});
    CHECK(gt.blocks.at(Rational(BigInt(1), BigInt(2))) ==
          std::vector<int>{t.find("x+"), t.find("y-")});
    CHECK(gt.blocks.at(Rational(0)) == std::vector<int>{t.find("H"), t.find("Z")});
    CHECK(gt.blocks.at(Rational(BigInt(-1), BigInt(2))) ==
          std::vector<int>{t.find("x-"), t.find("y+")});
    CHECK(gt.blocks.at(Rational(-1)) == std::vector<int>{t.find("F")});
    CHECK(gt.n_plus == std::vector<int>{t.find("E"), t.find("x+"), t.find("y-")});
    CHECK(gt.g_half == std::vector<int>{t.find("x+"), t.find("y-")});

    Grading gz = sl2_grading(t, -1);
    REQUIRE(gz.blocks.size() == 1);
    CHECK(gz.blocks.at(Rational(0)).size() == 8);

    CHECK(thrown_code([&] { sl2_grading(s, s.e); }) == "sl2-grading-unknown-nilpotent");
    CHECK(thrown_code([] { sl2_grading(lie_from_text(u1_text), 0); }) ==
          "sl2-grading-no-triple");
}
