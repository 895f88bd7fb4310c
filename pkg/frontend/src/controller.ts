import { ApiClient } from "./api.js";
import { Debouncer } from "./debounce.js";
import { REQUIRED_PRODUCT_INPUTS } from "./validate.js";
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

export interface AppState {
  model: ModelSpec | null;
  selectedOffers: number;
  scan: ScanPayload | null;
  forecast: ForecastPayload | null;
  breakEven: BreakEvenPayload | null;
  product: ProductPayload | null;
  productError: string | null;
  summary: SummaryPayload | null;
  // results lag the latest inputs (debounce pending, request in flight, or
  // the last refresh failed); stale data stays visible but marked
  stale: boolean;
  error: string | null;
}

export interface ControllerOptions {
  windowRadius: number;
  debounceMs: number;
  breakEvenMax: number;
}

const DEFAULTS: ControllerOptions = {
  windowRadius: 4,
  debounceMs: 250,
  breakEvenMax: 60,
};

export class Controller {
  readonly state: AppState = {
    model: null,
    selectedOffers: 20,
    scan: null,
    forecast: null,
    breakEven: null,
    product: null,
    productError: null,
    summary: null,
    stale: false,
    error: null,
  };

  private readonly opts: ControllerOptions;
  private readonly debouncer: Debouncer;
  private readonly listeners: Array<(state: AppState) => void> = [];
  // interaction token: stamped per refresh, so a slow earlier response can
  // never overwrite the result of the latest slider position
  private token = 0;

  constructor(private readonly api: ApiClient, opts: Partial<ControllerOptions> = {}) {
    this.opts = { ...DEFAULTS, ...opts };
    this.debouncer = new Debouncer(this.opts.debounceMs);
  }

  subscribe(listener: (state: AppState) => void) {
    this.listeners.push(listener);
  }

  private emit() {
    for (const listener of this.listeners) listener(this.state);
  }

  offersWindow(): number[] {
    const center = this.state.selectedOffers;
    const lo = Math.max(0, center - this.opts.windowRadius);
    const hi = center + this.opts.windowRadius;
    const offers = [];
    for (let o = lo; o <= hi; o++) offers.push(o);
    return offers;
  }

  async submitModel(spec: ModelSpec): Promise<void> {
    this.state.model = spec;
    this.state.breakEven = null;
    this.state.stale = true;
    this.emit();
    const token = ++this.token;
    try {
      const breakEven = await this.api.breakEven(spec, 0, this.opts.breakEvenMax);
      if (token !== this.token) return;
      this.state.breakEven = breakEven;
    } catch (err) {
      if (token !== this.token) return;
      this.state.error = String((err as Error).message ?? err);
      this.emit();
      return;
    }
    await this.refresh(token);
  }

  setOffers(offers: number) {
    this.state.selectedOffers = offers;
    this.state.stale = true;
    this.emit();
    this.debouncer.schedule(() => {
      void this.refresh(++this.token);
    });
  }

  private async refresh(token: number): Promise<void> {
    const model = this.state.model;
    if (!model) return;
    try {
      const [scan, forecast] = await Promise.all([
        this.api.scan(model, this.offersWindow()),
        this.api.forecast(model, this.state.selectedOffers),
      ]);
      if (token !== this.token) return;
      this.state.scan = scan;
      this.state.forecast = forecast;
      this.state.stale = false;
      this.state.error = null;
    } catch (err) {
      if (token !== this.token) return;
      // non-blocking: keep the previous results on screen, marked stale
      this.state.error = String((err as Error).message ?? err);
      this.state.stale = true;
    }
    this.emit();
  }

  async requestProduct(user: UserType, inputs: ProductInputs): Promise<void> {
    const model = this.state.model;
    if (!model) return;
    const missing = REQUIRED_PRODUCT_INPUTS[user].filter(
      (name) => inputs[name] === undefined || Number.isNaN(inputs[name]),
    );
    if (missing.length > 0) {
      this.state.productError = `missing required input: ${missing.join(", ")}`;
      this.state.product = null;
      this.emit();
      return;
    }
    this.state.productError = null;
    try {
      this.state.product = await this.api.product(
        model,
        this.state.selectedOffers,
        user,
        inputs,
      );
    } catch (err) {
      this.state.productError = String((err as Error).message ?? err);
      this.state.product = null;
    }
    this.emit();
  }

  async requestSummary(sample: number[], thresholds: number[]): Promise<void> {
    try {
      this.state.summary = await this.api.summarize(sample, thresholds);
      this.state.error = null;
    } catch (err) {
      this.state.error = String((err as Error).message ?? err);
    }
    this.emit();
  }
}
