// HTML string rendering, kept free of document access so it is unit
// testable; main.ts owns the DOM insertion and event wiring.

import type { FormField, FormModel } from "./form.js";
import { UNKNOWN, fieldValid, formValid } from "./form.js";
import type { PredictionView } from "./view.js";

function esc(text: string): string {
  return text.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}

function labelFor(name: string): string {
  return name.replace(/_/g, " ");
}

function fieldControl(field: FormField): string {
  if (field.kind === "numeric") {
    const cls = field.unknown || fieldValid(field) ? "" : " invalid";
    return (
      `<input type="text" inputmode="decimal" data-field="${esc(field.name)}"` +
      ` value="${esc(field.unknown ? UNKNOWN : field.raw)}" class="control${cls}">`
    );
  }
  const options = ["", ...field.levels, UNKNOWN]
    .map((lev) => {
      const selected =
        (field.unknown && lev === UNKNOWN) || (!field.unknown && lev === field.raw);
      return `<option value="${esc(lev)}"${selected ? " selected" : ""}>${esc(lev)}</option>`;
    })
    .join("");
  return `<select data-field="${esc(field.name)}" class="control">${options}</select>`;
}

export function renderForm(form: FormModel, fieldError: string | null): string {
  const rows = form.fields
    .map((field) => {
      const err = field.name === fieldError ? ` <span class="error">check this value</span>` : "";
      return (
        `<label class="field" data-field-row="${esc(field.name)}">` +
        `<span class="name">${esc(labelFor(field.name))}</span>` +
        fieldControl(field) +
        err +
        `</label>`
      );
    })
    .join("\n");
  const disabled = formValid(form) ? "" : " disabled";
  return (
    `<form id="patient-form">\n${rows}\n` +
    `<button type="submit" id="submit"${disabled}>Predict resistance</button>\n</form>`
  );
}

export function renderPredictions(view: PredictionView): string {
  const missing =
    view.missing.length === 0
      ? ""
      : `<p class="missing">missing features: ${view.missing.map(esc).join(", ")}</p>`;
  const rows = view.families
    .map(
      (f) =>
        `<div class="prediction" data-family="${esc(f.family)}">` +
        `<span class="family">${esc(f.family)}</span>` +
        `<span class="badge ${f.predicted === "R" ? "resistant" : "susceptible"}">${f.predicted}</span>` +
        `<span class="bar-track"><span class="bar" style="width:${f.barPercent}%"></span>` +
        `<span class="threshold-mark" style="left:${Math.round(100 * f.threshold)}%"></span></span>` +
        `<span class="probability" data-probability="${esc(f.display)}">${esc(f.display)}</span>` +
        `<span class="context">${esc(f.model)} &middot; AUC ${esc(f.contextAuc)} &middot; F2 ${esc(f.contextF2)}</span>` +
        `</div>`,
    )
    .join("\n");
  return `${missing}<div id="predictions">\n${rows}\n</div>`;
}

export function renderRetryBanner(baseUrl: string): string {
  return (
    `<div class="banner" id="retry-banner">service unreachable at ${esc(baseUrl)} ` +
    `<button id="retry">retry</button></div>`
  );
}
