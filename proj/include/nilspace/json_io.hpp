#pragma once

#include <json.hpp>

#include "nilspace/congruence.hpp"
#include "nilspace/double_coset.hpp"
#include "nilspace/gowers.hpp"
#include "nilspace/poly.hpp"
#include "nilspace/translation.hpp"

namespace nilspace {

using Json = nlohmann::ordered_json;

// All parsers throw Error(Parse) on malformed input.
Json rational_json(const Rational& q);  // "p/q", or "p" for integers
Rational parse_rational_json(const Json& j);
Json element_json(const Element& e);
Element parse_element(const Json& j);

Json kinds_json(const Kinds& k);  // one {"kind","modulus","rank"} object, or a list of them
Kinds parse_kinds(const Json& j);
Json signature_json(const Signature& s);
Signature parse_signature(const Json& j);

// Exponent keys "(i,j)": degree i, j-th coordinate of that degree counting from 1.
Json morphism_json(const PolyMorphism& phi);
PolyMorphism parse_morphism(const Json& j);
Json translation_json(const Translation& t);
Translation parse_translation(const Json& j, const Signature& space, bool validate = true);
Json candidate_json(const CongruenceCandidate& c);
CongruenceCandidate parse_candidate(const Json& j);

FilteredGroup parse_filtered_group(const Json& j);
Subgroup parse_subgroup(const FilteredGroup& g, const Json& gens);

Json signal_json(const SignalTable& f);
SignalTable parse_signal(const Json& j);
Json complex_json(Complex c);
Complex parse_complex(const Json& j);
// {"n", "target", "components", "gamma":[translation...], "divisible", "window"} or {"quadratic":{"N","a"}}.
Nilcharacter parse_nilcharacter(const Json& j, Budget& budget);

Json point_json(const Point& p);
Point parse_point(const Json& j);
Json ft_report_json(const FtReport& r);
Json axiom_report_json(const AxiomReport& r, const FiniteCubespace& space);
Json invariants_json(const std::vector<AbelianInvariants>& groups);

}  // namespace nilspace
