import type {
  BreakEvenPayload,
  ForecastPayload,
  ModelSpec,
  ProductInputs,
  ProductPayload,
  ScanPayload,
  SummaryPayload,
  UserType,
} from "./types.js";

// Transport is injectable so tests can intercept every request/response pair.
export type Transport = (path: string, body: unknown) => Promise<unknown>;

export interface FieldError {
  field: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly fieldErrors: FieldError[] = [],
  ) {
    super(message);
  }
}

export const httpTransport = (baseUrl: string): Transport => {
  return async (path, body) => {
    const resp = await fetch(baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail = `${resp.status}`;
      let fields: FieldError[] = [];
      try {
        const parsed = await resp.json();
        if (Array.isArray(parsed.errors)) {
          fields = parsed.errors;
          detail = fields.map((e) => `${e.field}: ${e.message}`).join("; ");
        } else if (parsed.detail) {
          detail = String(parsed.detail);
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail, fields);
    }
    return resp.json();
  };
};

export interface EngineOpts {
  engine?: "exact" | "mc";
  draws?: number;
  seed?: number;
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  scan(model: ModelSpec, offers: number[], opts: EngineOpts = {}): Promise<ScanPayload> {
    return this.transport("/v1/scan", { model, offers, ...opts }) as Promise<ScanPayload>;
  }

  forecast(model: ModelSpec, offers: number, opts: EngineOpts = {}): Promise<ForecastPayload> {
    return this.transport("/v1/forecast", { model, offers, ...opts }) as Promise<ForecastPayload>;
  }

  breakEven(model: ModelSpec, min: number, max: number): Promise<BreakEvenPayload> {
    return this.transport("/v1/break-even", { model, min, max }) as Promise<BreakEvenPayload>;
  }

  product(
    model: ModelSpec,
    offers: number,
    user: UserType,
    inputs: ProductInputs,
  ): Promise<ProductPayload> {
    return this.transport("/v1/product", {
      model,
      offers,
      user,
      alpha: inputs.alpha,
      cost_under: inputs.costUnder,
      cost_over: inputs.costOver,
      observed: inputs.observed,
    }) as Promise<ProductPayload>;
  }

  summarize(sample: number[], thresholds: number[]): Promise<SummaryPayload> {
    return this.transport("/v1/summarize", { sample, thresholds }) as Promise<SummaryPayload>;
  }
}
