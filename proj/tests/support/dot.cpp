#include "dot.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace minisa::oracle {

namespace {

std::string unescape(const std::string &s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    char c = s[++i];
    out += (c == 'l' || c == 'n') ? '\n' : c;
  }
  return out;
}

} // namespace

std::vector<std::string> DotGraph::sinks() const {
  std::set<std::string> has_out;
  for (const auto &e : edges)
    has_out.insert(e.first);
  std::vector<std::string> out;
  for (const auto &[id, label] : labels)
    if (!has_out.count(id))
      out.push_back(id);
  return out;
}

std::vector<DotGraph> parseDot(const std::string &text) {
  static const std::regex kOpen(R"re(^\s*digraph\s+"((?:[^"\\]|\\.)*)"\s*\{\s*$)re");
  static const std::regex kNode(R"re(^\s*(\w+)\s*\[label="((?:[^"\\]|\\.)*)"\];\s*$)re");
  static const std::regex kEdge(R"(^\s*(\w+)\s*->\s*(\w+)\s*;\s*$)");
  static const std::regex kAttr(R"(^\s*(node|edge|graph)\s*\[.*\];\s*$)");
  std::vector<DotGraph> out;
  bool open = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::smatch m;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    if (!open && std::regex_match(line, m, kOpen)) {
      out.push_back({unescape(m[1]), {}, {}});
      open = true;
    } else if (open && std::regex_match(line, m, kNode)) {
      out.back().labels[m[1]] = unescape(m[2]);
    } else if (open && std::regex_match(line, m, kEdge)) {
      out.back().edges.emplace_back(m[1], m[2]);
    } else if (open && std::regex_match(line, m, kAttr)) {
    } else if (open && line.find_first_not_of(" \t") == line.find('}')) {
      open = false;
    } else {
      throw std::runtime_error("dot line " + std::to_string(lineno) + ": cannot parse '" + line +
                               "'");
    }
  }
  if (open)
    throw std::runtime_error("dot: unterminated graph");
  for (const DotGraph &g : out)
    for (const auto &e : g.edges)
      if (!g.labels.count(e.first) || !g.labels.count(e.second))
        throw std::runtime_error("dot: edge to undeclared node " + e.first + " -> " + e.second);
  return out;
}

std::string checkHtml(const std::string &html) {
  static const std::set<std::string> kVoid = {"meta", "br", "hr", "img", "link", "input"};
  std::vector<std::string> stack;
  size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    if (c == '&') {
      size_t semi = html.find(';', i);
      if (semi == std::string::npos || semi - i > 10)
        return "bare '&' at offset " + std::to_string(i);
      std::string ent = html.substr(i + 1, semi - i - 1);
      bool ok = !ent.empty() && (std::isalpha((unsigned char)ent[0]) || ent[0] == '#');
      for (char e : ent)
        ok = ok && (std::isalnum((unsigned char)e) || e == '#');
      if (!ok)
        return "bad entity '&" + ent + ";'";
      i = semi + 1;
      continue;
    }
    if (c == '>')
      return "stray '>' at offset " + std::to_string(i);
    if (c != '<') {
      ++i;
      continue;
    }
    size_t close = html.find('>', i);
    if (close == std::string::npos)
      return "unterminated tag at offset " + std::to_string(i);
    std::string tag = html.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.rfind("!DOCTYPE", 0) == 0 || tag.rfind("!--", 0) == 0)
      continue;
    if (tag.find('<') != std::string::npos)
      return "'<' inside tag '" + tag + "'";
    bool closing = !tag.empty() && tag[0] == '/';
    bool self = !tag.empty() && tag.back() == '/';
    std::string body = tag.substr(closing ? 1 : 0);
    size_t end = 0;
    while (end < body.size() && std::isalnum((unsigned char)body[end]))
      ++end;
    std::string name = body.substr(0, end);
    if (name.empty())
      return "empty tag name";
    if (!closing && std::count(tag.begin(), tag.end(), '"') % 2)
      return "unbalanced quotes in <" + tag + ">";
    if (closing) {
      if (stack.empty() || stack.back() != name)
        return "</" + name + "> does not close <" + (stack.empty() ? "" : stack.back()) + ">";
      stack.pop_back();
    } else if (!self && !kVoid.count(name)) {
      stack.push_back(name);
    }
  }
  if (!stack.empty())
    return "unclosed <" + stack.back() + ">";
  return "";
}

} // namespace minisa::oracle
