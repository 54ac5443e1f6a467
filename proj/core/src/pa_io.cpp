#include "porta/pa_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace porta {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const json& expect(const json& j, const char* key, json::value_t type,
                   const std::string& path) {
  if (!j.contains(key))
    throw PaFormatError("missing key at " + path + "/" + key);
  const json& v = j.at(key);
  if (v.type() != type)
    throw PaFormatError("wrong type at " + path + "/" + key);
  return v;
}

std::string expect_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw PaFormatError("expected string at " + path);
  return j.get<std::string>();
}

}  // namespace

Pa load_pa(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw PaFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw PaFormatError("top level must be an object");

  PaBuilder b;
  const json& alphabet = expect(root, "alphabet", json::value_t::array, "");
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    b.add_letter(expect_string(alphabet[i], "/alphabet/" + std::to_string(i)));

  const json& states = expect(root, "states", json::value_t::array, "");
  std::set<std::string> names;
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::string name = expect_string(states[i], "/states/" + std::to_string(i));
    if (!names.insert(name).second)
      throw PaFormatError("duplicate state name at /states/" + std::to_string(i) +
                          ": " + name);
  }
  const json& accepting = expect(root, "accepting", json::value_t::array, "");
  std::set<std::string> acc;
  for (std::size_t i = 0; i < accepting.size(); ++i) {
    std::string name =
        expect_string(accepting[i], "/accepting/" + std::to_string(i));
    if (!names.count(name))
      throw PaFormatError("accepting state not in states: " + name);
    acc.insert(name);
  }
  for (const std::string& name : names) b.add_state(name, acc.count(name) > 0);

  auto known = [&](const std::string& name, const std::string& path) {
    if (!names.count(name))
      throw PaFormatError("unknown state at " + path + ": " + name);
    return name;
  };

  if (root.contains("delta")) {
    const json& delta = expect(root, "delta", json::value_t::array, "");
    std::set<std::pair<std::string, std::string>> keys;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      std::string path = "/delta/" + std::to_string(i);
      const json& entry = delta[i];
      if (!entry.is_object()) throw PaFormatError("expected object at " + path);
      std::string from =
          known(expect_string(expect(entry, "from", json::value_t::string, path),
                              path + "/from"),
                path + "/from");
      std::string label =
          expect_string(expect(entry, "label", json::value_t::string, path),
                        path + "/label");
      if (!keys.insert({from, label}).second)
        throw PaFormatError("duplicate (from,label) key at " + path);
      const json& to = expect(entry, "to", json::value_t::array, path);
      if (to.empty()) throw PaFormatError("empty \"to\" at " + path);
      for (std::size_t k = 0; k < to.size(); ++k)
        b.add_delta(from, label,
                    known(expect_string(to[k], path + "/to/" + std::to_string(k)),
                          path + "/to"));
    }
  }

  if (root.contains("gamma")) {
    const json& gamma = expect(root, "gamma", json::value_t::array, "");
    std::set<std::pair<std::string, Multiset<std::string>>> keys;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      std::string path = "/gamma/" + std::to_string(i);
      const json& entry = gamma[i];
      if (!entry.is_object()) throw PaFormatError("expected object at " + path);
      std::string from =
          known(expect_string(expect(entry, "from", json::value_t::string, path),
                              path + "/from"),
                path + "/from");
      const json& fork = expect(entry, "fork", json::value_t::array, path);
      Multiset<std::string> members;
      for (std::size_t k = 0; k < fork.size(); ++k) {
        const json& pair = fork[k];
        std::string ppath = path + "/fork/" + std::to_string(k);
        if (!pair.is_array() || pair.size() != 2)
          throw PaFormatError("expected [state, multiplicity] at " + ppath);
        std::string member = known(expect_string(pair[0], ppath), ppath);
        if (!pair[1].is_number_integer() || pair[1].get<int>() <= 0)
          throw PaFormatError("multiplicity must be a positive integer at " + ppath);
        if (members.contains(member))
          throw PaFormatError("duplicate fork member entry at " + ppath);
        members.add(member, pair[1].get<int>());
      }
      if (!keys.insert({from, members}).second)
        throw PaFormatError("duplicate (from,fork) key at " + path);
      const json& to = expect(entry, "to", json::value_t::array, path);
      if (to.empty()) throw PaFormatError("empty \"to\" at " + path);
      for (std::size_t k = 0; k < to.size(); ++k)
        b.add_fork(from, members,
                   known(expect_string(to[k], path + "/to/" + std::to_string(k)),
                         path + "/to"));
    }
  }
  return b.build();
}

Pa load_pa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PaFormatError("cannot open file: " + path);
  return load_pa(in);
}

std::string save_pa(const Pa& a) {
  ordered_json root;
  root["alphabet"] = a.alphabet;
  root["states"] = a.states;
  ordered_json accepting = ordered_json::array();
  for (std::size_t q = 0; q < a.states.size(); ++q)
    if (a.accepting[q]) accepting.push_back(a.states[q]);
  root["accepting"] = std::move(accepting);

  ordered_json delta = ordered_json::array();
  for (std::size_t q = 0; q < a.states.size(); ++q)
    for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
      if (a.delta[q][l].empty()) continue;
      ordered_json entry;
      entry["from"] = a.states[q];
      entry["label"] = a.alphabet[l];
      ordered_json to = ordered_json::array();
      for (int t : a.delta[q][l]) to.push_back(a.states[t]);
      entry["to"] = std::move(to);
      delta.push_back(std::move(entry));
    }
  root["delta"] = std::move(delta);

  ordered_json gamma = ordered_json::array();
  for (std::size_t q = 0; q < a.states.size(); ++q)
    for (const Fork& fork : a.gamma[q]) {
      ordered_json entry;
      entry["from"] = a.states[q];
      ordered_json members = ordered_json::array();
      for (const auto& [m, count] : fork.members.entries())
        members.push_back(ordered_json::array({a.states[m], count}));
      entry["fork"] = std::move(members);
      ordered_json to = ordered_json::array();
      for (int t : fork.targets) to.push_back(a.states[t]);
      entry["to"] = std::move(to);
      gamma.push_back(std::move(entry));
    }
  root["gamma"] = std::move(gamma);
  return root.dump(2) + "\n";
}

void save_pa_file(const Pa& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw PaFormatError("cannot open file for writing: " + path);
  out << save_pa(a);
}

}  // namespace porta
