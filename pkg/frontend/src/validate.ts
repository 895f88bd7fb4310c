import type { AcceptanceSpec, ComponentSpec, ModelSpec } from "./types.js";

// Editable mirror of a model spec: raw field strings plus per-field errors.
// Submission stays disabled until every field validates; the server remains
// the authority and re-validates everything.

export interface ModelDraft {
  taPositions: string;
  currentStudents: string;
  raInternal: string;
  raExternal: string;
  graduating: string;
  leaving: string;
  acceptance: string;
  extra: string;
}

export type DraftErrors = Partial<Record<keyof ModelDraft, string>>;

export interface DraftCheck {
  errors: DraftErrors;
  spec: ModelSpec | null;
}

const SUM_TOLERANCE = 1e-9;

function parseCount(text: string): number | string {
  const trimmed = text.trim();
  if (!/^\d+$/.test(trimmed)) return "expected a non-negative integer";
  return Number(trimmed);
}

function checkPmf(pmf: unknown): string | null {
  if (typeof pmf !== "object" || pmf === null || Array.isArray(pmf)) {
    return "pmf must be a value→probability object";
  }
  let total = 0;
  for (const [key, prob] of Object.entries(pmf)) {
    if (!/^-?\d+$/.test(key)) return `pmf key ${key} is not an integer`;
    if (typeof prob !== "number" || prob < 0) {
      return `pmf probability for ${key} must be a number ≥ 0`;
    }
    total += prob;
  }
  if (Math.abs(total - 1) > SUM_TOLERANCE) {
    return `pmf probabilities sum to ${total}, not 1`;
  }
  return null;
}

function parseComponent(text: string): ComponentSpec | string {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    return `not valid JSON: ${(err as Error).message}`;
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    return "expected an object with one of pmf/history/experts";
  }
  const section = parsed as ComponentSpec;
  const forms = (["pmf", "history", "experts"] as const).filter(
    (k) => section[k] !== undefined,
  );
  if (forms.length !== 1) {
    return `give exactly one of pmf/history/experts (found ${forms.length})`;
  }
  if (section.pmf !== undefined) {
    const problem = checkPmf(section.pmf);
    if (problem) return problem;
  }
  if (section.experts !== undefined) {
    if (!Array.isArray(section.experts) || section.experts.length === 0) {
      return "experts must be a non-empty list";
    }
    for (const [i, expert] of section.experts.entries()) {
      const problem = checkPmf(expert?.pmf);
      if (problem) return `expert ${expert?.id ?? i}: ${problem}`;
    }
  }
  if (section.history !== undefined) {
    const h = section.history;
    const emptyList = Array.isArray(h) && h.length === 0;
    const emptyMap = !Array.isArray(h) && Object.keys(h).length === 0;
    if (emptyList || emptyMap) return "history is empty";
  }
  return section;
}

function parseAcceptance(text: string): AcceptanceSpec | string {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    return `not valid JSON: ${(err as Error).message}`;
  }
  if (typeof parsed !== "object" || parsed === null) {
    return "expected an object with 'fixed' or 'history'";
  }
  const section = parsed as AcceptanceSpec;
  const hasFixed = section.fixed !== undefined;
  const hasHistory = section.history !== undefined;
  if (hasFixed === hasHistory) return "give exactly one of 'fixed' or 'history'";
  if (hasFixed) {
    const p = section.fixed as number;
    if (typeof p !== "number" || p < 0 || p > 1) {
      return "fixed acceptance probability must be in [0, 1]";
    }
  } else {
    const h = section.history;
    if (!Array.isArray(h) || h.length === 0) return "history must be a non-empty list";
    for (const pair of h) {
      if (!Array.isArray(pair) || pair.length !== 2) {
        return "history entries are [offers, acceptances] pairs";
      }
      if (pair[1] > pair[0]) return `history entry [${pair}] has acceptances > offers`;
    }
  }
  return section;
}

export function validateDraft(draft: ModelDraft): DraftCheck {
  const errors: DraftErrors = {};

  const taPositions = parseCount(draft.taPositions);
  if (typeof taPositions === "string") errors.taPositions = taPositions;
  const currentStudents = parseCount(draft.currentStudents);
  if (typeof currentStudents === "string") errors.currentStudents = currentStudents;

  const components: Partial<Record<string, ComponentSpec>> = {};
  for (const name of ["raInternal", "raExternal", "graduating", "leaving"] as const) {
    const result = parseComponent(draft[name]);
    if (typeof result === "string") errors[name] = result;
    else components[name] = result;
  }

  const acceptance = parseAcceptance(draft.acceptance);
  if (typeof acceptance === "string") errors.acceptance = acceptance;

  let extra = 0;
  if (draft.extra.trim() !== "") {
    if (!/^-?\d+$/.test(draft.extra.trim())) errors.extra = "expected an integer";
    else extra = Number(draft.extra.trim());
  }

  if (Object.keys(errors).length > 0) return { errors, spec: null };
  return {
    errors,
    spec: {
      schema_version: 1,
      ta_positions: taPositions as number,
      current_students: currentStudents as number,
      ra_internal: components.raInternal as ComponentSpec,
      ra_external: components.raExternal as ComponentSpec,
      graduating: components.graduating as ComponentSpec,
      leaving: components.leaving as ComponentSpec,
      acceptance: acceptance as AcceptanceSpec,
      ...(extra !== 0 ? { extra } : {}),
    },
  };
}

// Inputs each product type cannot be requested without; checked before any
// request is issued so a missing field never reaches the network.
export const REQUIRED_PRODUCT_INPUTS: Record<string, Array<"alpha" | "costUnder" | "costOver" | "observed">> = {
  "low-stakes": [],
  "general-assessor": [],
  "change-assessor": ["observed"],
  "risk-avoider": ["alpha"],
  "decision-theorist": ["costUnder", "costOver"],
};
