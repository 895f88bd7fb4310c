import { ApiClient, httpTransport } from "./api.js";
import { Controller } from "./controller.js";
import {
  histogramView,
  renderBanner,
  renderHistogram,
  renderProductCard,
  renderScanTable,
  renderSummary,
  scanView,
} from "./render.js";
import { validateDraft, type ModelDraft } from "./validate.js";
import type { ProductInputs, UserType } from "./types.js";

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const serviceUrl =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8000";

const controller = new Controller(new ApiClient(httpTransport(serviceUrl)));

const draftFields: Array<[keyof ModelDraft, string]> = [
  ["taPositions", "f-ta"],
  ["currentStudents", "f-current"],
  ["raInternal", "f-ra-internal"],
  ["raExternal", "f-ra-external"],
  ["graduating", "f-graduating"],
  ["leaving", "f-leaving"],
  ["acceptance", "f-acceptance"],
  ["extra", "f-extra"],
];

function readDraft(): ModelDraft {
  const draft = {} as ModelDraft;
  for (const [key, id] of draftFields) {
    draft[key] = (el<HTMLInputElement | HTMLTextAreaElement>(id)).value;
  }
  return draft;
}

function revalidate() {
  const check = validateDraft(readDraft());
  for (const [key, id] of draftFields) {
    const message = check.errors[key] ?? "";
    el(`${id}-error`).textContent = message;
    el(id).classList.toggle("invalid", message !== "");
  }
  el<HTMLButtonElement>("submit-model").disabled = check.spec === null;
  return check;
}

function currentProductInputs(): ProductInputs {
  const num = (id: string): number | undefined => {
    const raw = el<HTMLInputElement>(id).value.trim();
    return raw === "" ? undefined : Number(raw);
  };
  return {
    alpha: num("p-alpha"),
    costUnder: num("p-cost-under"),
    costOver: num("p-cost-over"),
    observed: num("p-observed"),
  };
}

controller.subscribe((state) => {
  el("banner").innerHTML = renderBanner(state.error);
  if (state.scan) {
    const rows = scanView(state.scan, state.selectedOffers, state.breakEven);
    el("scan-panel").innerHTML = renderScanTable(rows, state.stale);
  }
  if (state.forecast) {
    el("dist-panel").innerHTML = renderHistogram(histogramView(state.forecast));
    el("dist-caption").textContent =
      `Lost positions at ${state.forecast.offers} offers; ` +
      "bars left of the zero line are students needing outside funding.";
  }
  el("offer-value").textContent = String(state.selectedOffers);
  el("product-error").textContent = state.productError ?? "";
  el("product-panel").innerHTML = state.product ? renderProductCard(state.product) : "";
  el("summary-panel").innerHTML = state.summary ? renderSummary(state.summary) : "";
});

for (const [, id] of draftFields) {
  el(id).addEventListener("input", revalidate);
}

el("submit-model").addEventListener("click", () => {
  const check = revalidate();
  if (check.spec) void controller.submitModel(check.spec);
});

const slider = el<HTMLInputElement>("offer-slider");
slider.addEventListener("input", () => {
  controller.setOffers(Number(slider.value));
});

el("product-go").addEventListener("click", () => {
  const user = el<HTMLSelectElement>("p-user").value as UserType;
  void controller.requestProduct(user, currentProductInputs());
});

el("summary-go").addEventListener("click", () => {
  const sample = el<HTMLTextAreaElement>("s-sample")
    .value.split(/\s+/)
    .filter(Boolean)
    .map(Number);
  const thresholds = el<HTMLInputElement>("s-thresholds")
    .value.split(",")
    .map((t) => t.trim())
    .filter(Boolean)
    .map(Number);
  void controller.requestSummary(sample, thresholds);
});

revalidate();
