import { escapeHtml, formatPercent, probLosing, stanceClass } from "./format.js";
import type {
  BreakEvenPayload,
  ForecastPayload,
  ProductPayload,
  ScanPayload,
  SummaryPayload,
} from "./types.js";

export const PERCENTILE_KEYS = ["p10", "p33", "p50", "p67", "p90"] as const;
export const PERCENTILE_HEADERS = ["10%", "33%", "50%", "67%", "90%"];

// View models are plain data so tests can audit every displayed value
// against the intercepted service payload before any HTML is involved.

export interface ScanRowView {
  offers: number;
  cells: string[];
  riskPct: string;
  label: string;
  labelClass: string;
  selected: boolean;
  isBreakEven: boolean;
}

export function scanView(
  scan: ScanPayload,
  selectedOffers: number,
  breakEven: BreakEvenPayload | null,
): ScanRowView[] {
  return scan.rows.map((row) => ({
    offers: row.offers,
    cells: PERCENTILE_KEYS.map((key) => String(row.percentiles[key])),
    riskPct: formatPercent(probLosing(row.p_nonpos)),
    label: row.label,
    labelClass: stanceClass(row.label),
    selected: row.offers === selectedOffers,
    isBreakEven: breakEven !== null && breakEven.offers === row.offers,
  }));
}

export function renderScanTable(rows: ScanRowView[], stale: boolean): string {
  const head =
    "<tr><th>#Offers</th>" +
    PERCENTILE_HEADERS.map((h) => `<th>${h}</th>`).join("") +
    "<th>P(lose positions)</th><th>Description</th></tr>";
  const body = rows
    .map((row) => {
      const classes = [
        row.selected ? "selected" : "",
        row.isBreakEven ? "break-even" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const marker = row.isBreakEven ? '<span class="be-marker">break-even</span> ' : "";
      return (
        `<tr${classes ? ` class="${classes}"` : ""} data-offers="${row.offers}">` +
        `<td>${marker}${row.offers}</td>` +
        row.cells.map((c) => `<td>${c}</td>`).join("") +
        `<td>${row.riskPct}</td>` +
        `<td class="${row.labelClass}">${escapeHtml(row.label)}</td>` +
        "</tr>"
      );
    })
    .join("");
  const staleClass = stale ? ' class="stale"' : "";
  return `<table${staleClass}>${head}${body}</table>`;
}

export interface BarView {
  value: number;
  heightPct: number;
  negative: boolean;
  tooltip: string;
}

export function histogramView(forecast: ForecastPayload): BarView[] {
  const dist = forecast.distribution;
  if (dist.kind === "pmf") {
    const entries = Object.entries(dist.probs)
      .map(([v, p]) => [Number(v), p] as const)
      .sort((a, b) => a[0] - b[0]);
    const maxProb = Math.max(...entries.map(([, p]) => p));
    return entries.map(([value, prob]) => ({
      value,
      heightPct: (prob / maxProb) * 100,
      negative: value < 0,
      tooltip: `P(Y = ${value}) = ${prob}`,
    }));
  }
  const entries = Object.entries(dist.counts)
    .map(([v, c]) => [Number(v), c] as const)
    .sort((a, b) => a[0] - b[0]);
  const maxCount = Math.max(...entries.map(([, c]) => c));
  return entries.map(([value, count]) => ({
    value,
    heightPct: (count / maxCount) * 100,
    negative: value < 0,
    tooltip: `${count} of ${dist.n} draws`,
  }));
}

export function renderHistogram(bars: BarView[]): string {
  const rendered = bars
    .map((bar, i) => {
      const zeroLine =
        bar.value >= 0 && (i === 0 || bars[i - 1].value < 0)
          ? '<div class="zero-line" title="zero"></div>'
          : "";
      return (
        zeroLine +
        `<div class="bar${bar.negative ? " negative" : ""}" ` +
        `style="height:${bar.heightPct.toFixed(2)}%" ` +
        `title="${escapeHtml(bar.tooltip)}" data-value="${bar.value}"></div>`
      );
    })
    .join("");
  return `<div class="histogram">${rendered}</div>`;
}

export function renderProductCard(payload: ProductPayload): string {
  const p = payload.product;
  let body: string;
  switch (p.type) {
    case "point":
      body = `Point forecast (median): <strong>${p.value}</strong>`;
      break;
    case "interval":
      body =
        `Central ${Math.round(p.level * 100)}% interval: ` +
        `<strong>[${p.lo}, ${p.hi}]</strong>`;
      break;
    case "bound":
      body =
        `Precautionary lower bound (risk level ${p.alpha}): ` +
        `<strong>${p.value}</strong>`;
      break;
    case "alarm": {
      const wording =
        p.status === "in-range"
          ? "inside the projected range"
          : `OUTSIDE the projected range (${p.status})`;
      body =
        `Observed ${p.observed} is ${wording} ` +
        `<strong>[${p.lo}, ${p.hi}]</strong>`;
      break;
    }
    case "optimal-point":
      body =
        `Loss-optimal point forecast (quantile level ${p.tau}): ` +
        `<strong>${p.value}</strong>`;
      break;
  }
  return `<div class="product-card" data-user="${payload.user}">${body}</div>`;
}

export function renderSummary(payload: SummaryPayload): string {
  const triple =
    "<tr><th>p10</th><th>p50</th><th>p90</th></tr>" +
    `<tr><td>${payload.p10}</td><td>${payload.p50}</td><td>${payload.p90}</td></tr>`;
  const rows = payload.exceedances
    .map(
      (e) =>
        `<tr><td>${e.threshold}</td>` +
        `<td class="${e.suppressed ? "suppressed" : ""}">` +
        `${e.suppressed ? "" : formatPercent(e.probability as number)}</td></tr>`,
    )
    .join("");
  const risks = rows
    ? `<table class="exceedances"><tr><th>threshold</th><th>P(X &gt; threshold)</th></tr>${rows}</table>`
    : "";
  return `<table class="percentiles">${triple}</table>${risks}`;
}

export function renderBanner(error: string | null): string {
  if (!error) return "";
  return `<div class="banner error">${escapeHtml(error)}</div>`;
}
