#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qbiject/config.hpp"
#include "qbiject/poly.hpp"
#include "qbiject/trace.hpp"

namespace qbiject {

/// (b, d) with H(f(q)) <= b H(q)^d on Q in [0,1]: f = (1/L) sum a_i x^i,
/// b = max(sum |a_i|, L), d = deg f.
std::pair<mpz_class, unsigned long> poly_height_coeff(const Poly& f);

/// Certified upper bound for s(T) = c (ln T)^k, rounded up to an integer.
mpz_class s_upper_ceil(const SlowFunction& s, const mpz_class& T);

/// Least T >= start with farey_count(floor((T/b)^(1/d))) >= ceil(s(T)).
mpz_class choose_T(const mpz_class& b, unsigned long d, const mpz_class& start, const SlowFunction& s);

/// Largest threshold count_Cf will enumerate.
extern const mpz_class kCountLimit;

/// #{q in [0,1] : H(q) <= T, H(f(q)) <= T}, counted exactly. f must map [0,1] into itself.
mpz_class count_Cf(const Poly& f, const mpz_class& T);

/// Q_n = {q : H(q) <= T} together with the earlier z's, sorted by value.
std::vector<Rat> pila_nodes(const mpz_class& T, const std::vector<Rat>& zs);

/// Runs cfg.stages steps; stage records 0..cfg.stages. Stops early, recording
/// the reason in Trace::halted, when a node set would exceed cfg.node_budget.
using StageObserver = std::function<void(const StageRecord&)>;
Trace run_pila(const Config& cfg, const StageObserver& observe = {});

/// f_0, f_1, ... rebuilt from the stage records alone.
std::vector<Poly> pila_partial_sums(const Trace& t);

/// Spread of up to `count` points of height <= T, in lexicographic order.
std::vector<Rat> freeze_sample(const mpz_class& T, std::size_t count);

}  // namespace qbiject
