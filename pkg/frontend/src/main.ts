// Console wiring: load the schema, generate the form, post predictions,
// render results. The previous result stays on screen until a newer
// response arrives; stale responses lose by sequence number.

import { ServiceClient, ServiceError, type MetricsDoc } from "./api.js";
import { buildForm, setField, toPayload, formValid, type FormModel } from "./form.js";
import { LatestWins } from "./sequence.js";
import { renderForm, renderPredictions, renderRetryBanner } from "./render.js";
import { buildView } from "./view.js";

const params = new URLSearchParams(window.location.search);
const client = new ServiceClient(params.get("service") ?? "http://127.0.0.1:8000");

const formHost = document.getElementById("form-host")!;
const resultHost = document.getElementById("result-host")!;
const bannerHost = document.getElementById("banner-host")!;

let form: FormModel | null = null;
let metrics: MetricsDoc | null = null;
let fieldError: string | null = null;
const sequence = new LatestWins();

function drawForm(): void {
  if (!form) return;
  formHost.innerHTML = renderForm(form, fieldError);
  for (const control of formHost.querySelectorAll<HTMLElement>("[data-field]")) {
    control.addEventListener("change", onFieldChange);
    control.addEventListener("input", onFieldChange);
  }
  document.getElementById("patient-form")!.addEventListener("submit", (ev) => {
    ev.preventDefault();
    void submit();
  });
}

function onFieldChange(ev: Event): void {
  const el = ev.currentTarget as HTMLInputElement | HTMLSelectElement;
  if (!form) return;
  form = setField(form, el.dataset.field!, el.value);
  fieldError = null;
  const button = document.getElementById("submit") as HTMLButtonElement;
  button.disabled = !formValid(form);
}

async function submit(): Promise<void> {
  if (!form || !formValid(form)) return;
  const ticket = sequence.take();
  try {
    const response = await client.predict(toPayload(form));
    if (!sequence.isCurrent(ticket)) return; // a newer submit won
    resultHost.innerHTML = renderPredictions(buildView(response, metrics));
  } catch (err) {
    if (!sequence.isCurrent(ticket)) return;
    if (err instanceof ServiceError && err.status === 422 && err.field) {
      fieldError = err.field;
      drawForm();
    } else {
      showRetryBanner();
    }
  }
}

function showRetryBanner(): void {
  bannerHost.innerHTML = renderRetryBanner(client.baseUrl);
  document.getElementById("retry")!.addEventListener("click", () => void boot());
}

async function boot(): Promise<void> {
  bannerHost.innerHTML = "";
  try {
    const schema = await client.schema();
    form = buildForm(schema);
    metrics = await client.metrics().catch(() => null);
    drawForm();
  } catch {
    showRetryBanner();
  }
}

void boot();
