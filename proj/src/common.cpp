#include "rslv/common.hpp"

namespace rslv {

const char* bin_op_str(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Implies: return "==>";
  }
  return "?";
}

const char* ob_kind_str(ObKind k) {
  switch (k) {
    case ObKind::InsufficientResource: return "insufficient-resource";
    case ObKind::AssertFailure: return "assert-failure";
    case ObKind::PostconditionFailure: return "postcondition-failure";
    case ObKind::PreconditionAtCallFailure: return "precondition-at-call";
    case ObKind::CouplingInvariantFailure: return "coupling-invariant-failure";
    case ObKind::NegativeAmount: return "negative-amount";
    case ObKind::Leak: return "leak";
  }
  return "?";
}

std::optional<ObKind> ob_kind_from_str(const std::string& s) {
  for (ObKind k :
       {ObKind::InsufficientResource, ObKind::AssertFailure,
        ObKind::PostconditionFailure, ObKind::PreconditionAtCallFailure,
        ObKind::CouplingInvariantFailure, ObKind::NegativeAmount,
        ObKind::Leak}) {
    if (s == ob_kind_str(k)) return k;
  }
  return std::nullopt;
}

}  // namespace rslv
