// Mirrors of the service's /v1/* payloads. The UI renders these verbatim;
// it never recomputes statistics client-side.

export interface ComponentSpec {
  pmf?: Record<string, number>;
  history?: number[] | Record<string, number>;
  experts?: Array<{ id?: string; pmf: Record<string, number> }>;
}

export interface AcceptanceSpec {
  fixed?: number;
  history?: Array<[number, number]>;
  prior?: [number, number];
  source?: string;
}

export interface ModelSpec {
  schema_version: number;
  ta_positions: number;
  current_students: number;
  ra_internal: ComponentSpec;
  ra_external: ComponentSpec;
  graduating: ComponentSpec;
  leaving: ComponentSpec;
  acceptance: AcceptanceSpec;
  extra?: number;
}

export interface ScanRowPayload {
  offers: number;
  percentiles: Record<string, number>;
  p_nonpos: number;
  label: string;
}

export interface ScanPayload {
  schema_version: number;
  engine: string;
  draws?: number;
  seed?: number;
  rows: ScanRowPayload[];
}

export type DistributionPayload =
  | { kind: "pmf"; probs: Record<string, number> }
  | { kind: "binned"; counts: Record<string, number>; n: number };

export interface ForecastPayload {
  schema_version: number;
  engine: string;
  draws?: number;
  seed?: number;
  offers: number;
  p_nonpos: number;
  distribution: DistributionPayload;
}

export interface BreakEvenPayload {
  schema_version: number;
  found: boolean;
  offers: number | null;
  p_nonpos: number | null;
}

export type ProductBody =
  | { type: "point"; value: number }
  | { type: "interval"; lo: number; hi: number; level: number }
  | { type: "bound"; value: number; alpha: number }
  | { type: "alarm"; status: string; lo: number; hi: number; observed: number }
  | { type: "optimal-point"; value: number; tau: number };

export interface ProductPayload {
  schema_version: number;
  user: string;
  product: ProductBody;
}

export interface ExceedanceEntry {
  threshold: number;
  probability: number | null;
  suppressed: boolean;
}

export interface SummaryPayload {
  schema_version: number;
  p10: number;
  p50: number;
  p90: number;
  suppression: number;
  exceedances: ExceedanceEntry[];
}

export type UserType =
  | "low-stakes"
  | "general-assessor"
  | "change-assessor"
  | "risk-avoider"
  | "decision-theorist";

export interface ProductInputs {
  alpha?: number;
  costUnder?: number;
  costOver?: number;
  observed?: number;
}
