#include "tindex/nzdata.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tindex {

namespace {

using nlohmann::json;

IMat parse_matrix(const json& j, const std::string& key, i64 n) {
    if (!j.contains(key)) throw SchemaError("missing key \"" + key + "\"");
    const json& m = j.at(key);
    if (!m.is_array() || static_cast<i64>(m.size()) != n)
        throw SchemaError("\"" + key + "\": expected " + std::to_string(n) + " rows");
    IMat out(n, n);
    for (i64 r = 0; r < n; ++r) {
        const json& row = m.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<i64>(row.size()) != n)
            throw SchemaError("\"" + key + "\" row " + std::to_string(r) + ": expected " +
                              std::to_string(n) + " columns");
        for (i64 c = 0; c < n; ++c) {
            const json& v = row.at(static_cast<std::size_t>(c));
            if (!v.is_number_integer())
                throw SchemaError("\"" + key + "\" row " + std::to_string(r) + " column " +
                                  std::to_string(c) + ": expected an integer");
            out(r, c) = v.get<i64>();
        }
    }
    return out;
}

IVec parse_vector(const json& j, const std::string& where, const std::string& key, i64 n) {
    if (!j.contains(key)) throw SchemaError(where + ": missing key \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_array() || static_cast<i64>(v.size()) != n)
        throw SchemaError(where + " \"" + key + "\": expected " + std::to_string(n) + " entries");
    IVec out(n);
    for (i64 i = 0; i < n; ++i) {
        const json& x = v.at(static_cast<std::size_t>(i));
        if (!x.is_number_integer())
            throw SchemaError(where + " \"" + key + "\" entry " + std::to_string(i) +
                              ": expected an integer");
        out(i) = x.get<i64>();
    }
    return out;
}

PeripheralRow parse_peripheral(const json& j, const std::string& where, i64 n) {
    PeripheralRow p;
    p.on_z = parse_vector(j, where, "A", n);
    p.on_zp = parse_vector(j, where, "B", n);
    p.on_zpp = parse_vector(j, where, "C", n);
    return p;
}

json matrix_json(const IMat& m) {
    json rows = json::array();
    for (i64 r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (i64 c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const IVec& v) {
    json out = json::array();
    for (i64 i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

} // namespace

GluingData parse_gluing(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("top level must be an object");
    GluingData g;
    g.name = j.value("name", std::string{});
    if (!j.contains("num_tetrahedra") || !j.at("num_tetrahedra").is_number_integer())
        throw SchemaError("missing integer \"num_tetrahedra\"");
    if (!j.contains("num_cusps") || !j.at("num_cusps").is_number_integer())
        throw SchemaError("missing integer \"num_cusps\"");
    g.num_tet = j.at("num_tetrahedra").get<i64>();
    g.num_cusps = j.at("num_cusps").get<i64>();
    if (g.num_tet <= 0) throw SchemaError("\"num_tetrahedra\" must be positive");
    if (g.num_cusps <= 0) throw SchemaError("\"num_cusps\" must be positive");
    g.edge_A = parse_matrix(j, "edge_A", g.num_tet);
    g.edge_B = parse_matrix(j, "edge_B", g.num_tet);
    g.edge_C = parse_matrix(j, "edge_C", g.num_tet);
    if (!j.contains("cusps") || !j.at("cusps").is_array() ||
        static_cast<i64>(j.at("cusps").size()) != g.num_cusps)
        throw SchemaError("\"cusps\": expected an array of num_cusps entries");
    for (i64 k = 0; k < g.num_cusps; ++k) {
        const json& cj = j.at("cusps").at(static_cast<std::size_t>(k));
        std::string where = "cusp " + std::to_string(k);
        if (!cj.contains("meridian") || !cj.contains("longitude"))
            throw SchemaError(where + ": needs \"meridian\" and \"longitude\"");
        Cusp c;
        c.meridian = parse_peripheral(cj.at("meridian"), where + " meridian", g.num_tet);
        c.longitude = parse_peripheral(cj.at("longitude"), where + " longitude", g.num_tet);
        g.cusps.push_back(std::move(c));
    }
    return g;
}

std::string serialize_gluing(const GluingData& g) {
    json j;
    j["name"] = g.name;
    j["num_tetrahedra"] = g.num_tet;
    j["num_cusps"] = g.num_cusps;
    j["edge_A"] = matrix_json(g.edge_A);
    j["edge_B"] = matrix_json(g.edge_B);
    j["edge_C"] = matrix_json(g.edge_C);
    json cusps = json::array();
    for (const Cusp& c : g.cusps) {
        json cj;
        cj["meridian"] = {{"A", vector_json(c.meridian.on_z)},
                          {"B", vector_json(c.meridian.on_zp)},
                          {"C", vector_json(c.meridian.on_zpp)}};
        cj["longitude"] = {{"A", vector_json(c.longitude.on_z)},
                           {"B", vector_json(c.longitude.on_zp)},
                           {"C", vector_json(c.longitude.on_zpp)}};
        cusps.push_back(std::move(cj));
    }
    j["cusps"] = std::move(cusps);
    return j.dump(2) + "\n";
}

GluingData load_gluing_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_gluing(ss.str());
}

std::vector<std::string> lint_gluing(const GluingData& g) {
    std::vector<std::string> warnings;
    for (i64 t = 0; t < g.num_tet; ++t) {
        i64 total = g.edge_A.col(t).sum() + g.edge_B.col(t).sum() + g.edge_C.col(t).sum();
        if (total != 6)
            warnings.push_back("tetrahedron " + std::to_string(t) + " has " + std::to_string(total) +
                               " edge slots (expected 6)");
    }
    return warnings;
}

void apply_col_s(IMat& A, IMat& B, IVec& nu, i64 col, int times) {
    times = ((times % 3) + 3) % 3;
    for (int k = 0; k < times; ++k) {
        IVec a = A.col(col), b = B.col(col);
        A.col(col) = -b;
        B.col(col) = a - b;
        nu -= b;
    }
}

void apply_col_s_row(IVec& arow, IVec& brow, i64& cst, i64 col, int times) {
    times = ((times % 3) + 3) % 3;
    for (int k = 0; k < times; ++k) {
        i64 a = arow(col), b = brow(col);
        arow(col) = -b;
        brow(col) = a - b;
        cst -= b;
    }
}

ReducedSystem reduce(const GluingData& g, const QuadChoice& quad) {
    if (static_cast<i64>(quad.size()) != g.num_tet)
        throw std::invalid_argument("reduce: quad choice length mismatch");
    ReducedSystem rs;
    rs.A = g.edge_A - g.edge_B;
    rs.B = g.edge_C - g.edge_B;
    rs.nu = IVec::Constant(g.num_tet, 2) - g.edge_B.rowwise().sum();
    for (i64 t = 0; t < g.num_tet; ++t)
        if (quad[static_cast<std::size_t>(t)] != 0) apply_col_s(rs.A, rs.B, rs.nu, t, quad[static_cast<std::size_t>(t)]);
    return rs;
}

IndexInput select_rows(const ReducedSystem& rs, i64 num_cusps, std::vector<i64>* selected) {
    const i64 n = rs.A.cols(); // number of tetrahedra
    IMat ab(rs.A.rows(), rs.A.cols() + rs.B.cols());
    ab << rs.A, rs.B;
    std::vector<i64> rows = greedy_row_basis(ab);
    if (static_cast<i64>(rows.size()) != n - num_cusps)
        throw RankError("rank of (A|B) is " + std::to_string(rows.size()) + ", expected " +
                        std::to_string(n - num_cusps));
    IndexInput m;
    m.A.resize(n - num_cusps, n);
    m.B.resize(n - num_cusps, n);
    m.nu.resize(n - num_cusps);
    for (i64 i = 0; i < static_cast<i64>(rows.size()); ++i) {
        m.A.row(i) = rs.A.row(rows[static_cast<std::size_t>(i)]);
        m.B.row(i) = rs.B.row(rows[static_cast<std::size_t>(i)]);
        m.nu(i) = rs.nu(rows[static_cast<std::size_t>(i)]);
    }
    if (selected) *selected = rows;
    return m;
}

IndexInput index_input(const GluingData& g, const QuadChoice& quad) {
    return select_rows(reduce(g, quad), g.num_cusps);
}

PeripheralReduced reduce_peripheral(const GluingData& g, const QuadChoice& quad) {
    if (static_cast<i64>(quad.size()) != g.num_tet)
        throw std::invalid_argument("reduce_peripheral: quad choice length mismatch");
    const i64 n = g.num_tet, r = g.num_cusps;
    PeripheralReduced p;
    p.a.resize(n, r);
    p.b.resize(n, r);
    p.c.resize(n, r);
    p.d.resize(n, r);
    p.meridian_const.resize(r);
    p.longitude_const.resize(r);
    for (i64 j = 0; j < r; ++j) {
        auto reduce_row = [&](const PeripheralRow& row, IVec& acol, IVec& bcol, i64& cst) {
            acol = row.on_z - row.on_zp;
            bcol = row.on_zpp - row.on_zp;
            cst = -row.on_zp.sum();
            for (i64 t = 0; t < n; ++t)
                if (quad[static_cast<std::size_t>(t)] != 0)
                    apply_col_s_row(acol, bcol, cst, t, quad[static_cast<std::size_t>(t)]);
        };
        IVec am, bm, al, bl;
        i64 cm = 0, cl = 0;
        reduce_row(g.cusps[static_cast<std::size_t>(j)].meridian, am, bm, cm);
        reduce_row(g.cusps[static_cast<std::size_t>(j)].longitude, al, bl, cl);
        p.a.col(j) = am;
        p.b.col(j) = bm;
        p.c.col(j) = al;
        p.d.col(j) = bl;
        p.meridian_const(j) = cm;
        p.longitude_const(j) = cl;
    }
    return p;
}

} // namespace tindex
