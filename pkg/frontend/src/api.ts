/**
 * Typed REST client for the annotation service.
 *
 * Every call round-trips to the server; nothing sentiment-related is
 * computed client-side. Timestamps are always server-assigned, so the
 * submission payloads never carry one.
 */

export interface SentimentTriple {
  positive: number;
  neutral: number;
  negative: number;
}

export interface DiscrepancyFlag {
  item_id: string;
  direction: "wrong_negative" | "wrong_positive";
  rating: number;
  score: SentimentTriple;
  categories: string[];
  primary_category: string | null;
}

export interface ContronymOccurrence {
  token_index: number;
  lemma: string;
  positive_glosses: string[];
  negative_glosses: string[];
}

export interface AnnotationRecord {
  item_id: string;
  kind: "polarity_tag" | "post_edit";
  annotator: string;
  timestamp: number;
  token_index?: number;
  polarity?: "POS" | "NEG";
  edited_target?: string;
}

export interface QueueItem {
  flag: DiscrepancyFlag;
  source_tokens: string[];
  mt_text: string | null;
  rating: number;
  contronym_occurrences: ContronymOccurrence[];
  current_annotations: AnnotationRecord[];
}

export interface QueuePage {
  total: number;
  page: number;
  page_size: number;
  items: QueueItem[];
}

export interface EvalReport {
  bleu: number;
  cost_positive: number;
  cost_negative: number;
  scalar_mode: string;
  word_precision?: number | null;
  word_recall?: number | null;
  word_f1?: number | null;
}

export interface HistogramEntry {
  count: number;
  proportion: number;
}

export interface ReportPayload {
  histogram: Record<string, HistogramEntry>;
  report?: EvalReport;
}

export type PolaritySubmission = {
  kind: "polarity_tag";
  annotator: string;
  token_index: number;
  polarity: "POS" | "NEG";
};

export type PostEditSubmission = {
  kind: "post_edit";
  annotator: string;
  edited_target: string;
};

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  // fetch is injectable so tests can run without a server
  constructor(private baseUrl = "", private fetchFn: FetchLike = fetch) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const detail =
        typeof body?.detail === "string" ? body.detail : `HTTP ${resp.status}`;
      throw new ApiError(resp.status, detail);
    }
    return body as T;
  }

  getQueue(category?: string, page = 1, pageSize = 20): Promise<QueuePage> {
    const params = new URLSearchParams({
      page: String(page),
      page_size: String(pageSize),
    });
    if (category) params.set("category", category);
    return this.request<QueuePage>(`/api/queue?${params}`);
  }

  getItem(itemId: string): Promise<QueueItem> {
    return this.request<QueueItem>(`/api/items/${encodeURIComponent(itemId)}`);
  }

  submitAnnotation(
    itemId: string,
    body: PolaritySubmission | PostEditSubmission,
  ): Promise<AnnotationRecord> {
    return this.request<AnnotationRecord>(
      `/api/items/${encodeURIComponent(itemId)}/annotations`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
  }

  getReport(): Promise<ReportPayload> {
    return this.request<ReportPayload>("/api/report");
  }
}
