#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "twistor/metric.hpp"

namespace twistor {

// All report writers share this formatting (17 significant digits) so
// identical runs produce byte-identical files.
std::string fmt_g17(double v);

std::string json_escape(const std::string& s);

// Minimal ordered JSON emitter. Keys appear in call order; numbers go
// through fmt_g17. indent <= 0 emits a single line (container headers),
// indent > 0 pretty-prints (reports).
class JsonEmitter {
 public:
  explicit JsonEmitter(int indent = 2) : indent_(indent) {}

  JsonEmitter& obj();
  JsonEmitter& arr();
  JsonEmitter& close();
  JsonEmitter& key(const std::string& k);
  JsonEmitter& num(double v);
  JsonEmitter& integer(long long v);
  JsonEmitter& str(const std::string& v);
  JsonEmitter& boolean(bool v);
  JsonEmitter& z(cplx v);  // [re, im]

  // single-call helpers for "key": value pairs
  JsonEmitter& field(const std::string& k, double v) { return key(k).num(v); }
  JsonEmitter& field(const std::string& k, long long v) { return key(k).integer(v); }
  JsonEmitter& field(const std::string& k, int v) { return key(k).integer(v); }
  JsonEmitter& field(const std::string& k, const std::string& v) { return key(k).str(v); }
  JsonEmitter& field(const std::string& k, const char* v) { return key(k).str(v); }
  JsonEmitter& field(const std::string& k, bool v) { return key(k).boolean(v); }
  JsonEmitter& field(const std::string& k, cplx v) { return key(k).z(v); }

  std::string take();

 private:
  void before_value();
  void newline();

  std::string out_;
  std::vector<char> stack_;
  std::vector<bool> empty_;
  bool pending_key_ = false;
  int indent_;
};

void csv_header(std::ostream& os, const std::vector<std::string>& cols);
void csv_row(std::ostream& os, const std::vector<double>& vals);

}  // namespace twistor
