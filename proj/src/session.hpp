// Operations shared by the C interface and the manifest runner.
#pragma once

#include <cstddef>
#include <string>

#include "json.hpp"
#include "qspec/enumerate.hpp"
#include "qspec/io.hpp"
#include "qspec/ops.hpp"
#include "qspec/quant.hpp"

namespace qspec::session {

struct Options {
    std::size_t budget = 100000;
    std::size_t max_states = 2;
    std::size_t postra_limit = 16;
    double tol = kDefaultTolerance;
    bool split_divisor = true;
    bool prune = false;
};

const System& lookup(const SpecDocument& doc, const std::string& name);

/// Finite implementation alphabet for the bounded oracles, drawn from the operands.
std::vector<Label> oracle_alphabet(const SpecDocument& doc, const System& a, const System& b);
LtsUniverse oracle_universe(const SpecDocument& doc, const System& a, const System& b, const Options& o);

nlohmann::json refine_report(const SpecDocument& doc, const std::string& left, const std::string& right,
                             const RefinementWitness& w);

System compose_op(const SpecDocument& doc, const System& a, const System& b);
System conjoin_op(const SpecDocument& doc, const System& a, const System& b);
System disjoin_op(const System& a, const System& b);
System quotient_op(const SpecDocument& doc, const System& dividend, const System& divisor, const Options& o);
System prune_op(const System& a);
System translate_op(const SpecDocument& doc, const System& s, Formalism target, const Options& o);

const Lts& as_lts(const System& s, const std::string& name);
NuExpr as_nu(const System& s, const std::string& name);

nlohmann::json run_manifest(const std::string& manifest, const std::string& base_dir, const Options& o);

} // namespace qspec::session
