#include "gsd/action_engine.hpp"

#include <sstream>

namespace gsd {

Interpretation update(const Interpretation& interp, const UpdateOp& op) {
  const std::uint64_t dom = interp.domain_mask();
  Interpretation out = interp;
  if (!op.is_role) {
    if (op.concept_payload & ~dom) throw Error("update: payload outside domain");
    std::uint64_t& ext = out.concept_ext[op.target];  // absent name = empty extension
    ext = op.add ? (ext | op.concept_payload) : (ext & ~op.concept_payload);
  } else {
    if (op.role_payload.size() != interp.size()) throw Error("update: payload row count mismatch");
    auto& rows = out.role_ext[op.target];
    rows.resize(interp.size(), 0);
    for (std::size_t i = 0; i < interp.size(); ++i) {
      if (op.role_payload[i] & ~dom) throw Error("update: payload outside domain");
      rows[i] = op.add ? (rows[i] | op.role_payload[i]) : (rows[i] & ~op.role_payload[i]);
    }
  }
  return out;
}

namespace {

Interpretation run(Interpretation interp, const Action& action, std::size_t from,
                   std::vector<std::string>* trace) {
  for (std::size_t i = from; i < action.steps.size(); ++i) {
    const Step& s = action.steps[i];
    switch (s.kind) {
      case Step::Kind::AddConcept:
      case Step::Kind::RemoveConcept: {
        UpdateOp op;
        op.target = s.target;
        op.is_role = false;
        op.add = s.kind == Step::Kind::AddConcept;
        op.concept_payload = eval_concept(interp, s.concept_payload);
        if (trace) {
          std::ostringstream line;
          line << s.target << (op.add ? " += " : " -= ") << "{";
          auto ids = mask_to_ids(interp, op.concept_payload);
          for (std::size_t k = 0; k < ids.size(); ++k) line << (k ? ", " : "") << ids[k];
          line << "}";
          trace->push_back(line.str());
        }
        interp = update(interp, op);
        break;
      }
      case Step::Kind::AddRole:
      case Step::Kind::RemoveRole: {
        UpdateOp op;
        op.target = s.target;
        op.is_role = true;
        op.add = s.kind == Step::Kind::AddRole;
        op.role_payload = eval_role(interp, s.role_payload);
        if (trace) {
          std::ostringstream line;
          line << s.target << (op.add ? " += " : " -= ") << "{";
          bool first = true;
          for (std::size_t a = 0; a < interp.size(); ++a)
            for (std::size_t b = 0; b < interp.size(); ++b)
              if (op.role_payload[a] >> b & 1) {
                line << (first ? "" : ", ") << "(" << interp.elements[a] << ","
                     << interp.elements[b] << ")";
                first = false;
              }
          line << "}";
          trace->push_back(line.str());
        }
        interp = update(interp, op);
        break;
      }
      case Step::Kind::Conditional: {
        bool taken = models(interp, s.guard);
        if (trace)
          trace->push_back(std::string("if ") + to_string(s.guard) + " -> " +
                           (taken ? "then" : "else"));
        const Action& branch = taken ? *s.then_branch : *s.else_branch;
        Action rest;
        rest.steps.assign(branch.steps.begin(), branch.steps.end());
        rest.steps.insert(rest.steps.end(), action.steps.begin() + i + 1, action.steps.end());
        return run(std::move(interp), rest, 0, trace);
      }
    }
  }
  return interp;
}

}  // namespace

Interpretation execute(const Interpretation& interp, const Action& action) {
  if (!is_ground(action)) throw Error("execute: action is not ground");
  return run(interp, action, 0, nullptr);
}

Interpretation execute_traced(const Interpretation& interp, const Action& action,
                              std::vector<std::string>* trace) {
  if (!is_ground(action)) throw Error("execute: action is not ground");
  return run(interp, action, 0, trace);
}

}  // namespace gsd
