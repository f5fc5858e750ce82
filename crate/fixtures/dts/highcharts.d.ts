// A small slice of the Highcharts option types.
interface HighchartsChartOptions {
    renderTo?: string;
}

interface HighchartsTitleOptions {
    text?: string;
}

interface HighchartsSeriesOptions {
    data?: number[][];
    name?: string;
}

interface HighchartsOptions {
    chart?: HighchartsChartOptions;
    title?: HighchartsTitleOptions;
    series?: HighchartsSeriesOptions[];
}

interface HighchartsStatic {
    chart(options: HighchartsOptions): any;
}

declare var Highcharts: HighchartsStatic;
