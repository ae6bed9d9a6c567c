#include "hsiegel/cache.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace hsiegel {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fnv_hex(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json field_json(const FieldElement& x) {
    auto [a, b] = x.basis_coords();
    return json::array({to_string(a), to_string(b), std::to_string(x.d())});
}

FieldElement field_from(const json& j) {
    long d = std::stol(j.at(2).get<std::string>());
    return FieldElement::from_basis(d, Rational(j.at(0).get<std::string>()), Rational(j.at(1).get<std::string>()));
}

json quat_json(const QuatElement& x) {
    json j = json::array();
    for (auto& c : x.c) j.push_back(field_json(c));
    return j;
}

QuatElement quat_from(const json& j) {
    return QuatElement(field_from(j.at(0)), field_from(j.at(1)), field_from(j.at(2)), field_from(j.at(3)));
}

json dmat_json(const DMat& h) {
    json j = json::array();
    for (auto x : h) j.push_back(x);
    return j;
}

DMat dmat_from(const json& j) {
    DMat h;
    for (size_t k = 0; k < 32; ++k) h[k] = j.at(k).get<int64_t>();
    return h;
}

std::string herm_str(const HermitianMatrix& g) { return g.s.str() + "|" + g.t.str() + "|" + g.r.str(); }

std::optional<json> read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) return std::nullopt;
    try {
        json j = json::parse(in);
        if (j.value("schema", 0) != Cache::kSchema) return std::nullopt;
        return j;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

void write_atomic(const fs::path& p, const json& j) {
    fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        out << j.dump() << "\n";
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    fs::rename(tmp, p);
}

}  // namespace

std::string order_key(const OrderArith& R) {
    const QuatAlgebra& A = R.algebra();
    std::string s = std::to_string(A.d()) + ";" + A.a().str() + ";" + A.b().str();
    for (auto& e : R.order().basis()) s += ";" + e.str();
    return fnv_hex(s);
}

std::string class_key(const OrderArith& R, const ClassSet& cs) {
    std::string s = order_key(R);
    for (auto& r : cs.reps) {
        s += ";" + herm_str(r.gamma);
        for (auto& x : r.alpha) s += "," + x.str();
    }
    return fnv_hex(s);
}

Cache::Cache(std::string dir) : dir_(std::move(dir)) {}

ClassSet Cache::classes(const OrderArith& R, const FieldElement& q, const std::function<ClassSet()>& compute) const {
    if (!enabled()) return compute();
    std::string key = fnv_hex(order_key(R) + ";" + q.str());
    fs::path p = fs::path(dir_) / ("classes-" + key + ".json");
    if (auto j = read_json(p); j && j->value("key", "") == key) {
        ClassSet cs;
        cs.mass = Rational(j->at("mass").get<std::string>());
        for (auto& c : j->at("classes")) {
            LatticeRep rep;
            rep.gamma.s = field_from(c.at("s"));
            rep.gamma.t = field_from(c.at("t"));
            rep.gamma.r = quat_from(c.at("r"));
            for (size_t k = 0; k < 4; ++k) rep.alpha[k] = quat_from(c.at("alpha").at(k));
            cs.reps.push_back(rep);
            cs.stab_orders.push_back(c.at("stabilizer_order").get<long>());
            std::vector<DMat> st;
            for (auto& h : c.at("stabilizer")) st.push_back(dmat_from(h));
            cs.stabilizers.push_back(st);
        }
        return cs;
    }
    ClassSet cs = compute();
    json j;
    j["schema"] = kSchema;
    j["kind"] = "classes";
    j["key"] = key;
    j["mass"] = to_string(cs.mass);
    j["classes"] = json::array();
    for (size_t a = 0; a < cs.reps.size(); ++a) {
        json c;
        c["s"] = field_json(cs.reps[a].gamma.s);
        c["t"] = field_json(cs.reps[a].gamma.t);
        c["r"] = quat_json(cs.reps[a].gamma.r);
        c["alpha"] = json::array();
        for (auto& x : cs.reps[a].alpha) c["alpha"].push_back(quat_json(x));
        c["stabilizer_order"] = cs.stab_orders[a];
        c["stabilizer"] = json::array();
        for (auto& h : cs.stabilizers[a]) c["stabilizer"].push_back(dmat_json(h));
        j["classes"].push_back(c);
    }
    write_atomic(p, j);
    return cs;
}

std::vector<Neighbor> Cache::neighbors(const OrderArith& R, const ClassSet& cs, const HeckeOperator& T) const {
    if (!enabled()) return hecke_neighbors(R, cs, T);
    std::string key = fnv_hex(class_key(R, cs) + ";" + T.P.ideal.str() + ";" + std::to_string(T.i) + ";" + T.u.str());
    fs::path p = fs::path(dir_) / ("neighbors-" + key + ".json");
    if (auto j = read_json(p); j && j->value("key", "") == key) {
        std::vector<Neighbor> out;
        for (auto& n : j->at("neighbors")) out.push_back({n.at(0).get<int>(), n.at(1).get<int>(), dmat_from(n.at(2))});
        return out;
    }
    auto nb = hecke_neighbors(R, cs, T);
    json j;
    j["schema"] = kSchema;
    j["kind"] = "neighbors";
    j["key"] = key;
    j["operator"] = T.label();
    j["neighbors"] = json::array();
    for (auto& n : nb) j["neighbors"].push_back(json::array({n.a, n.b, dmat_json(n.h)}));
    write_atomic(p, j);
    return nb;
}

}  // namespace hsiegel
