#include "qclat/comb_io.hpp"

#include <fstream>

namespace qclat {

json field_to_json(const FieldElem& e) {
    return json{{"rat", rational_string(e.rat())}, {"irr", rational_string(e.irr())}};
}

FieldElem field_from_json(const json& j, long disc, const std::string& where) {
    if (!j.is_object() || !j.contains("rat") || !j.contains("irr"))
        throw ParseError(where + ": expected {\"rat\": \"p/q\", \"irr\": \"p/q\"}");
    try {
        Rational rat = parse_rational(j.at("rat").get<std::string>());
        Rational irr = parse_rational(j.at("irr").get<std::string>());
        if (sgn(irr) == 0) return FieldElem::rational(rat);
        return FieldElem(rat, irr, disc);
    } catch (const json::exception&) {
        throw ParseError(where + ": rat/irr must be strings");
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

namespace {

json vec_to_json(const FieldVec& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back(field_to_json(e));
    return a;
}

FieldVec vec_from_json(const json& j, long disc, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ParseError(where + ": expected array of " + std::to_string(dim) + " field elements");
    FieldVec v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = field_from_json(j[i], disc, where + "/" + std::to_string(i));
    return v;
}

} // namespace

json comb_to_json(const Comb& m) {
    json comps = json::array();
    for (const auto& c : m.components()) {
        json basis = json::array();
        for (int col = 0; col < c.lattice.dim(); ++col)
            basis.push_back(vec_to_json(c.lattice.basis().column(col)));
        json terms = json::array();
        for (const auto& t : c.terms)
            terms.push_back(json{{"coeff", field_to_json(t.coeff)},
                                 {"phase", field_to_json(t.phase.t())},
                                 {"freq", vec_to_json(t.freq)}});
        comps.push_back(json{{"basis", basis}, {"offset", vec_to_json(c.offset)}, {"terms", terms}});
    }
    return json{{"dim", m.dim()}, {"disc", m.disc()}, {"components", comps}};
}

Comb comb_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("/: expected a JSON object");
    if (!j.contains("dim") || !j.at("dim").is_number_integer())
        throw ParseError("/dim: expected an integer");
    if (!j.contains("disc") || !j.at("disc").is_number_integer())
        throw ParseError("/disc: expected an integer");
    int dim = j.at("dim").get<int>();
    long disc = j.at("disc").get<long>();
    if (dim < 1 || dim > 4) throw ParseError("/dim: must be 1..4");
    if (disc != 0 && !is_valid_disc(disc)) throw ParseError("/disc: must be 0 or square-free >= 2");
    if (!j.contains("components") || !j.at("components").is_array())
        throw ParseError("/components: expected an array");

    Comb m(dim, disc);
    const json& comps = j.at("components");
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        std::string base = "/components/" + std::to_string(ci);
        const json& jc = comps[ci];
        if (!jc.is_object() || !jc.contains("basis") || !jc.contains("offset") ||
            !jc.contains("terms"))
            throw ParseError(base + ": expected {basis, offset, terms}");
        const json& jb = jc.at("basis");
        if (!jb.is_array() || static_cast<int>(jb.size()) != dim)
            throw ParseError(base + "/basis: expected " + std::to_string(dim) + " columns");
        std::vector<FieldVec> cols;
        for (int col = 0; col < dim; ++col)
            cols.push_back(vec_from_json(jb[col], disc, dim,
                                         base + "/basis/" + std::to_string(col)));
        Lattice lat = [&] {
            try {
                return Lattice(FieldMatrix::from_columns(cols));
            } catch (const Error& e) {
                throw ParseError(base + "/basis: " + e.what());
            }
        }();
        Point offset = vec_from_json(jc.at("offset"), disc, dim, base + "/offset");
        const json& jts = jc.at("terms");
        if (!jts.is_array() || jts.empty())
            throw ParseError(base + "/terms: expected a nonempty array");
        std::vector<Term> terms;
        for (size_t ti = 0; ti < jts.size(); ++ti) {
            std::string tbase = base + "/terms/" + std::to_string(ti);
            const json& jt = jts[ti];
            if (!jt.is_object() || !jt.contains("coeff") || !jt.contains("phase") ||
                !jt.contains("freq"))
                throw ParseError(tbase + ": expected {coeff, phase, freq}");
            FieldElem coeff = field_from_json(jt.at("coeff"), disc, tbase + "/coeff");
            FieldElem phase_t = field_from_json(jt.at("phase"), disc, tbase + "/phase");
            FieldVec freq = vec_from_json(jt.at("freq"), disc, dim, tbase + "/freq");
            terms.push_back(Term{std::move(coeff), Phase(phase_t), std::move(freq)});
        }
        m.add_component(lat, offset, std::move(terms));
    }
    return m;
}

Comb read_comb_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open comb file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return comb_from_json(j);
}

void write_comb_file(const std::string& path, const Comb& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write comb file: " + path);
    out << comb_to_json(m).dump(2) << "\n";
}

bool json_is_canonical(const json& j) {
    return comb_to_json(comb_from_json(j)) == j;
}

} // namespace qclat
