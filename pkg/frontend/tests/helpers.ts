import type { Transport } from "../src/api.js";
import rawFixture from "./fixtures/service.json";

// Frozen responses captured from the real service for the department fixture
// model: a full scan over offers 0..45, a forecast per offer count, the
// break-even result, product cards, and summaries.
export const fixture = rawFixture as any;

export interface RecordedCall {
  path: string;
  body: any;
  response: any;
}

const clone = <T>(value: T): T => JSON.parse(JSON.stringify(value));

export const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

function respond(path: string, body: any): any {
  switch (path) {
    case "/v1/scan": {
      const wanted: number[] = body.offers;
      const rows = fixture.scan.rows.filter((r: any) => wanted.includes(r.offers));
      return { ...fixture.scan, rows };
    }
    case "/v1/forecast":
      return fixture.forecasts[String(body.offers)];
    case "/v1/break-even":
      return fixture.break_even;
    case "/v1/product": {
      const equal =
        body.cost_under !== undefined && body.cost_under === body.cost_over;
      const key = equal ? `${body.user}-equal` : body.user;
      return fixture.products[key] ?? fixture.products[body.user];
    }
    case "/v1/summarize": {
      const allZero = body.sample.every((v: number) => v === 0);
      return allZero ? fixture.summaries.suppressed : fixture.summaries.visible;
    }
    default:
      throw new Error(`fake service: unknown path ${path}`);
  }
}

export class FakeService {
  calls: RecordedCall[] = [];
  failNext = 0;
  delayFor: (path: string, body: any) => number = () => 0;

  transport: Transport = async (path, body) => {
    const delay = this.delayFor(path, body);
    if (delay > 0) await sleep(delay);
    if (this.failNext > 0) {
      this.failNext -= 1;
      throw new Error("service unreachable");
    }
    const response = clone(respond(path, clone(body)));
    this.calls.push({ path, body: clone(body), response: clone(response) });
    return response;
  };

  lastCall(path: string): RecordedCall {
    for (let i = this.calls.length - 1; i >= 0; i--) {
      if (this.calls[i].path === path) return this.calls[i];
    }
    throw new Error(`no recorded call to ${path}`);
  }

  countCalls(path: string): number {
    return this.calls.filter((c) => c.path === path).length;
  }
}
