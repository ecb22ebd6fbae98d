#ifndef DIR_SERIALIZE_HPP
#define DIR_SERIALIZE_HPP

#include "dir/forensics.hpp"
#include "dir/invariants.hpp"
#include "dir/kernel.hpp"
#include "dir/match.hpp"

#include <iosfwd>
#include <string>

namespace dir {

// Binary containers, little-endian throughout.
//
//  *.dirb  kernel-bank cache: "DIRB", u32 entry count, then per entry a
//          header (u32 kind, i32 n, i32 m, i32 w, u32 M0, u32 N0,
//          u32 strategy code) followed by M0*N0 row-major complex f64 pairs.
//  *.dirf  field container: "DIRF", u8 payload kind (0 complex moment field,
//          1 real feature field, 2 match field), u32 M, u32 N, u32 channel
//          count, per-channel (u32 kind, i32 n, i32 m, i32 w), per-channel
//          row-major payload (complex pairs or real f64), then for payload
//          kinds 1/2 an M*N validity byte mask.
//  *.dirh  hash digest: "DIRH", u32 config hash, u32 grid cols, u32 grid
//          rows, u32 dim, per-component f64 (min, scale), payload bytes.

void bank_save(const std::string& path, const KernelBank& bank);
KernelBank bank_load(const std::string& path);

void field_save(const std::string& path, const MomentField& field);
MomentField field_load(const std::string& path);

void features_save(const std::string& path, const FeatureField& features);
FeatureField features_load(const std::string& path);

void match_save(const std::string& path, const MatchField& mf);
MatchField match_load(const std::string& path);

void digest_save(const std::string& path, const HashDigest& digest);
HashDigest digest_load(const std::string& path);

// In-memory round trip used by determinism tests.
std::string bank_to_bytes(const KernelBank& bank);

} // namespace dir

#endif
