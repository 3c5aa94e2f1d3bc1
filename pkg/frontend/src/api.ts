// Typed client for the annotation service. Every mutating call resolves
// only on a confirmed 2xx response; callers treat a rejection as "nothing
// happened" and may retry with the same idempotency key.

import type {
  Dimensions,
  DisagreementItem,
  KappaResponse,
  LabelRecordResponse,
  RoundSummary,
  TaskResponse,
  TaxonomyPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    } catch {
      /* keep statusText */
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

// Stable content hash so retrying an identical submission reuses the same
// idempotency key while a changed judgment gets a fresh one.
export function labelClientKey(roundId: string, tweetId: string, coder: string,
                               dims: Dimensions): string {
  const content = JSON.stringify([
    dims.message_type, dims.perspective, dims.person,
    dims.serious, dims.focus_on_bereaved, dims.mentions_case,
  ]);
  let hash = 5381;
  for (let i = 0; i < content.length; i++) {
    hash = ((hash << 5) + hash + content.charCodeAt(i)) >>> 0;
  }
  return `${roundId}:${tweetId}:${coder}:${hash.toString(16)}`;
}

export class ApiClient {
  constructor(private base = "/api/v1") {}

  getTaxonomy(): Promise<TaxonomyPayload> {
    return request(`${this.base}/taxonomy`);
  }

  listRounds(): Promise<RoundSummary[]> {
    return request(`${this.base}/rounds`);
  }

  createRound(body: {
    strategy: string;
    targets: number | Record<string, number>;
    coders: string[];
    seed?: number;
  }): Promise<RoundSummary> {
    return request(`${this.base}/rounds`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  nextTask(roundId: string, coder: string): Promise<TaskResponse> {
    const params = new URLSearchParams({ coder });
    return request(`${this.base}/rounds/${roundId}/next?${params}`);
  }

  submitLabel(roundId: string, coder: string, tweetId: string,
              dims: Dimensions): Promise<LabelRecordResponse> {
    return request(`${this.base}/rounds/${roundId}/labels`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        coder,
        tweet_id: tweetId,
        dimensions: dims,
        client_key: labelClientKey(roundId, tweetId, coder, dims),
      }),
    });
  }

  submitOverride(roundId: string, adjudicator: string, tweetId: string,
                 category: string): Promise<LabelRecordResponse> {
    return request(`${this.base}/rounds/${roundId}/override`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ adjudicator, tweet_id: tweetId, category }),
    });
  }

  getDisagreements(roundId: string, level: number):
      Promise<{ level: number; items: DisagreementItem[] }> {
    return request(`${this.base}/rounds/${roundId}/disagreements?level=${level}`);
  }

  getKappa(roundId: string, level: number, exclude?: string,
           coders?: [string, string]): Promise<KappaResponse> {
    const params = new URLSearchParams({ level: String(level) });
    if (exclude) params.set("exclude", exclude);
    if (coders) params.set("coders", coders.join(","));
    return request(`${this.base}/rounds/${roundId}/kappa?${params}`);
  }

  exportCsv(roundIds?: string[]): Promise<string> {
    const suffix = roundIds ? `?rounds=${roundIds.join(",")}` : "";
    return fetch(`${this.base}/export${suffix}`).then((r) => {
      if (!r.ok) throw new ApiError(r.status, r.statusText);
      return r.text();
    });
  }
}
