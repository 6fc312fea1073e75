// Typed client for the prediction service. The console talks to these four
// endpoints and nothing else.

export interface SchemaFeature {
  name: string;
  kind: "numeric" | "binary" | "ordinal" | "categorical";
  levels?: string[];
}

export interface SchemaDoc {
  features: SchemaFeature[];
  targets: string[];
}

export interface FamilyPrediction {
  family: string;
  model: string;
  probability: number;
  predicted: "R" | "S";
  threshold: number;
}

export interface PredictResponse {
  families: FamilyPrediction[];
  missing: string[];
}

export interface MetricsRow {
  family: string;
  model: string;
  recall: number | null;
  precision: number | null;
  f2: number | null;
  auc: number | null;
}

export interface MetricsDoc {
  rows: MetricsRow[];
  plan: string | null;
  seed: number | null;
}

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly field?: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ServiceError> {
  let message = `service returned ${resp.status}`;
  let field: string | undefined;
  try {
    const doc = await resp.json();
    if (typeof doc.error === "string") message = doc.error;
    if (typeof doc.field === "string") field = doc.field;
  } catch {
    // non-JSON error body; keep the status message
  }
  return new ServiceError(message, resp.status, field);
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async schema(): Promise<SchemaDoc> {
    const resp = await fetch(this.url("/schema"));
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as SchemaDoc;
  }

  async metrics(): Promise<MetricsDoc> {
    const resp = await fetch(this.url("/metrics"));
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as MetricsDoc;
  }

  async predict(features: Record<string, number | string | null>): Promise<PredictResponse> {
    const resp = await fetch(this.url("/predict"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ features }),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as PredictResponse;
  }

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(this.url("/health"));
      return resp.ok;
    } catch {
      return false;
    }
  }
}
