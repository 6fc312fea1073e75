// Form model derived entirely from the /schema document: one field per
// feature, no vocabulary baked into the client. A field is submittable when
// it holds a valid value or the clinician explicitly marked it unknown
// (sent as null, which the service encodes as missing).

import type { SchemaDoc, SchemaFeature } from "./api.js";

export const UNKNOWN = "(unknown)";

export interface FormField {
  name: string;
  kind: SchemaFeature["kind"];
  levels: string[];
  raw: string; // text box / select content; "" means untouched
  unknown: boolean;
}

export interface FormModel {
  fields: FormField[];
  targets: string[];
}

export function buildForm(schema: SchemaDoc): FormModel {
  return {
    fields: schema.features.map((f) => ({
      name: f.name,
      kind: f.kind,
      levels: f.levels ?? [],
      raw: "",
      unknown: false,
    })),
    targets: [...schema.targets],
  };
}

export function setField(form: FormModel, name: string, raw: string): FormModel {
  return {
    ...form,
    fields: form.fields.map((f) =>
      f.name === name ? { ...f, raw, unknown: raw === UNKNOWN } : f,
    ),
  };
}

export function fieldValid(field: FormField): boolean {
  if (field.unknown) return true;
  if (field.raw === "") return false;
  if (field.kind === "numeric") return Number.isFinite(Number(field.raw));
  return field.levels.includes(field.raw);
}

/** Submit stays disabled until every field is valid or explicitly unknown. */
export function formValid(form: FormModel): boolean {
  return form.fields.every(fieldValid);
}

export function toPayload(form: FormModel): Record<string, number | string | null> {
  const out: Record<string, number | string | null> = {};
  for (const field of form.fields) {
    if (field.unknown) {
      out[field.name] = null;
    } else if (field.kind === "numeric") {
      out[field.name] = Number(field.raw);
    } else {
      out[field.name] = field.raw;
    }
  }
  return out;
}
