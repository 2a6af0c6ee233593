namespace ml {}
